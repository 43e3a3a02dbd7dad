"""Markings: wide subcategories of morphisms to be inverted."""

from __future__ import annotations

from collections.abc import Iterable, Iterator
from dataclasses import dataclass
from typing import Any

from cocart.core.category import FinCat, is_isomorphism, isomorphisms, opposite
from cocart.core.functor import FunctorData
from cocart.utils.logging import get_logger

logger = get_logger(__name__)


def _closure(C: FinCat, gens: Iterable[int]) -> frozenset[int]:
    members = set(gens) | set(C.identity) | isomorphisms(C)
    pending = list(members)
    while pending:
        m = pending.pop()
        # m as the first and as the second factor
        for g in C.out_of(C.tgt[m]):
            if g in members:
                h = C.comp[(g, m)]
                if h not in members:
                    members.add(h)
                    pending.append(h)
        for f in C.into(C.src[m]):
            if f in members:
                h = C.comp[(m, f)]
                if h not in members:
                    members.add(h)
                    pending.append(h)
    return frozenset(members)


@dataclass(frozen=True)
class Marking:
    """A set W of morphisms of ``host`` closed under composition.

    Construction saturates the given members with all identities, all
    isomorphisms and composites; an info event is logged when anything
    beyond identities had to be added.
    """

    host: FinCat
    members: frozenset[int]

    def __post_init__(self) -> None:
        for m in self.members:
            self.host.check_morphism(m)
        saturated = _closure(self.host, self.members)
        added = saturated - self.members - set(self.host.identity)
        if added:
            logger.info(
                "marking_saturated",
                category=self.host.name,
                added=sorted(self.host.names[m] for m in added),
            )
        object.__setattr__(self, "members", saturated)

    def __contains__(self, m: object) -> bool:
        return m in self.members

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self.members))

    def __len__(self) -> int:
        return len(self.members)

    def non_identities(self) -> list[int]:
        """Members that are not identities, in index order."""
        return [m for m in sorted(self.members) if not self.host.is_identity(m)]

    def opposite(self) -> Marking:
        """The same members as a marking of the opposite category."""
        return Marking(opposite(self.host), self.members)

    def preimage(self, F: FunctorData) -> Marking:
        """Marking of F's source made of morphisms F sends into this marking."""
        return Marking(F.source, frozenset(m for m, n in enumerate(F.mor_map) if n in self.members))

    def maps_into(self, F: FunctorData, other: Marking) -> bool:
        """True iff F carries every member of this marking into ``other``."""
        return all(F.mor_map[m] in other.members for m in self.members)

    def inverts(self, F: FunctorData) -> bool:
        """True iff F sends every member to an isomorphism."""
        return all(is_isomorphism(F.target, F.mor_map[m]) for m in self.members)

    def is_trivial(self) -> bool:
        """True iff the marking contains only isomorphisms."""
        return self.members == isomorphisms(self.host) | set(self.host.identity)

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary."""
        return {
            "category": self.host.name,
            "members": [self.host.names[m] for m in sorted(self.members)],
        }


def saturate_marking(C: FinCat, gens: Iterable[int]) -> Marking:
    """Smallest marking of C containing gens.

    Raises:
        UnknownMorphism: If a generator is not a morphism of C
    """
    return Marking(C, frozenset(gens))


def marking_from_names(C: FinCat, names: Iterable[str]) -> Marking:
    """Saturated marking generated by named morphisms.

    Raises:
        UnknownMorphism: If a name is not a morphism of C
    """
    return saturate_marking(C, [C.mor(n) for n in names])


def isos_only(C: FinCat) -> Marking:
    """The minimal marking (identities and isomorphisms)."""
    return Marking(C, frozenset())


def all_morphisms(C: FinCat) -> Marking:
    """The maximal marking."""
    return Marking(C, frozenset(range(C.n_morphisms)))
