"""Disjoint-set structure used for quotients (congruences, coends, colimits)."""

from __future__ import annotations

from collections.abc import Hashable, Iterable
from typing import Generic, TypeVar

K = TypeVar("K", bound=Hashable)


class UnionFind(Generic[K]):
    """Union-find over hashable keys.

    Keys are numbered in insertion order and every class is represented by
    its earliest inserted member, so class listings are deterministic.
    """

    def __init__(self, keys: Iterable[K] = ()) -> None:
        self._index: dict[K, int] = {}
        self._keys: list[K] = []
        self._parent: list[int] = []
        for key in keys:
            self.add(key)

    def __len__(self) -> int:
        return len(self._keys)

    def __contains__(self, key: object) -> bool:
        return key in self._index

    def add(self, key: K) -> int:
        """Insert a key (no-op if present) and return its position."""
        position = self._index.get(key)
        if position is None:
            position = len(self._keys)
            self._index[key] = position
            self._keys.append(key)
            self._parent.append(position)
        return position

    def _root(self, position: int) -> int:
        root = position
        while self._parent[root] != root:
            root = self._parent[root]
        while self._parent[position] != root:
            self._parent[position], position = root, self._parent[position]
        return root

    def find(self, key: K) -> K:
        """Return the representative (earliest member) of the key's class."""
        return self._keys[self._root(self._index[key])]

    def union(self, a: K, b: K) -> bool:
        """Merge the classes of two keys.

        Returns:
            True if two distinct classes were merged
        """
        ra = self._root(self.add(a))
        rb = self._root(self.add(b))
        if ra == rb:
            return False
        if rb < ra:
            ra, rb = rb, ra
        self._parent[rb] = ra
        return True

    def same(self, a: K, b: K) -> bool:
        """Check whether two keys lie in one class."""
        return self._root(self._index[a]) == self._root(self._index[b])

    def classes(self) -> list[list[K]]:
        """List classes, each in insertion order, ordered by their first member."""
        grouped: dict[int, list[K]] = {}
        for position, key in enumerate(self._keys):
            grouped.setdefault(self._root(position), []).append(key)
        return [grouped[root] for root in sorted(grouped)]
