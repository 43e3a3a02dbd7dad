"""Categories over the chain [n]."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Any

from cocart.core.category import FinCat, chain, full_subcategory, opposite, product
from cocart.core.exceptions import BadBase, IllFormed

# (i, x, j, beta): source level, object of fiber i, target level, morphism of fiber j
CrossKey = tuple[int, int, int, int]


@dataclass(frozen=True)
class Correspondence:
    """A finite category with a functor to [n], given by object degrees.

    ``fibers`` optionally stores the fiber categories with their original
    names; fiber ``i`` object ``k`` is the ``k``-th degree-``i`` object of
    the total category and likewise for morphisms. ``cross_index`` maps
    ``(i, x, j, β)`` to the total morphism it denotes when the
    correspondence comes from a Grothendieck construction.
    """

    total: FinCat
    base_length: int
    degree: tuple[int, ...]
    fibers: tuple[FinCat, ...] | None = field(default=None, compare=False)
    cross_index: dict[CrossKey, int] = field(default_factory=dict, compare=False)
    localization: Any = field(default=None, compare=False)

    def __post_init__(self) -> None:
        T = self.total
        if len(self.degree) != T.n_objects:
            raise IllFormed("degree must assign a level to every object")
        if any(not 0 <= d <= self.base_length for d in self.degree):
            raise IllFormed(f"degrees must lie in [0, {self.base_length}]")
        for m in range(T.n_morphisms):
            if self.degree[T.src[m]] > self.degree[T.tgt[m]]:
                raise IllFormed(f"morphism {T.names[m]} decreases degree")
        if self.fibers is not None and len(self.fibers) != self.base_length + 1:
            raise IllFormed("one fiber per level is required")

    def __repr__(self) -> str:
        return f"Correspondence({self.total.name or '?'} over [{self.base_length}])"

    @cached_property
    def _levels(self) -> tuple[tuple[int, ...], ...]:
        return tuple(
            tuple(x for x, d in enumerate(self.degree) if d == i)
            for i in range(self.base_length + 1)
        )

    def objects_of_degree(self, i: int) -> tuple[int, ...]:
        """Total object indices of level i, in index order."""
        return self._levels[i]

    def fiber_embedding(self, i: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
        """Total indices of the objects and morphisms of fiber i."""
        T = self.total
        objects = self._levels[i]
        morphisms = tuple(
            m for m in range(T.n_morphisms) if self.degree[T.src[m]] == i and self.degree[T.tgt[m]] == i
        )
        return objects, morphisms

    def fiber(self, i: int) -> FinCat:
        """The fiber over level i."""
        if not 0 <= i <= self.base_length:
            raise BadBase(f"no level {i} over [{self.base_length}]")
        if self.fibers is not None:
            return self.fibers[i]
        return full_subcategory(self.total, self._levels[i], name=f"{self.total.name}_{i}")

    def morphism_degrees(self, m: int) -> tuple[int, int]:
        """Levels of the source and target of a total morphism."""
        return self.degree[self.total.src[m]], self.degree[self.total.tgt[m]]

    def cross_morphisms(self, i: int, j: int) -> tuple[int, ...]:
        """Total morphisms from level i to level j."""
        T = self.total
        return tuple(m for m in range(T.n_morphisms) if self.morphism_degrees(m) == (i, j))

    def opposite(self) -> Correspondence:
        """The opposite total category over [n] with levels reversed."""
        n = self.base_length
        fibers = None
        if self.fibers is not None:
            fibers = tuple(opposite(F) for F in reversed(self.fibers))
        return Correspondence(
            opposite(self.total),
            n,
            tuple(n - d for d in self.degree),
            fibers=fibers,
            cross_index=dict(self.cross_index),
        )

    def restrict(self, levels: tuple[int, ...]) -> Correspondence:
        """Base change along the injective monotone map [m] → [n] hitting ``levels``.

        Raises:
            BadBase: If levels are not strictly increasing within [0, n]
        """
        if not levels or any(not 0 <= i <= self.base_length for i in levels) or any(
            a >= b for a, b in zip(levels, levels[1:], strict=False)
        ):
            raise BadBase(f"cannot restrict [{self.base_length}] to levels {levels}")
        position = {i: k for k, i in enumerate(levels)}
        objects = [x for x in range(self.total.n_objects) if self.degree[x] in position]
        sub = full_subcategory(self.total, objects, name=f"{self.total.name}|{''.join(map(str, levels))}")
        T = self.total
        kept = [m for m in range(T.n_morphisms) if self.degree[T.src[m]] in position and self.degree[T.tgt[m]] in position]
        new_index = {m: k for k, m in enumerate(kept)}
        cross_index = {
            (position[i], x, position[j], beta): new_index[m]
            for (i, x, j, beta), m in self.cross_index.items()
            if i in position and j in position
        }
        fibers = None if self.fibers is None else tuple(self.fibers[i] for i in levels)
        return Correspondence(
            sub,
            len(levels) - 1,
            tuple(position[self.degree[x]] for x in objects),
            fibers=fibers,
            cross_index=cross_index,
        )

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary."""
        return {
            "base_length": self.base_length,
            "total": self.total.to_dict(),
            "degree": {self.total.objects[x]: d for x, d in enumerate(self.degree)},
        }


def delta1(X: Correspondence) -> Correspondence:
    """Restriction of a correspondence over [2] along δ¹: [1] → [2]."""
    if X.base_length != 2:
        raise BadBase("δ¹ needs a correspondence over [2]")
    return X.restrict((0, 2))


def product_correspondence(C: FinCat, n: int = 1) -> Correspondence:
    """The projection C×[n] → [n]; every fiber is C."""
    P = product(C, chain(n), name=f"{C.name}x[{n}]")
    return Correspondence(
        P,
        n,
        tuple(x % (n + 1) for x in range(P.n_objects)),
        fibers=(C,) * (n + 1),
    )
