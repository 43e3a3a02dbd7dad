"""Derivable families of functors over a finite base category."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from cocart.core.category import FinCat
from cocart.core.exceptions import HypothesisFailed, IllFormed, NotCertified
from cocart.core.functor import FunctorData, compose_functors, identity_functor
from cocart.core.marking import Marking
from cocart.core.natural import NatTrans, find_natural_isomorphism
from cocart.derived.adjunction import derive_adjoint_pair, find_right_adjoint
from cocart.derived.functors import left_derived
from cocart.derived.models import DerivedAdjunction, DerivedResult, DerivedStatus, FamilyResult
from cocart.localization.engine import DEFAULT_DEPTH, MethodChoice, localize
from cocart.localization.models import LocalizationResult
from cocart.utils.logging import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class FunctorFamily:
    """A strict functor from a base B to finite categories, with markings.

    ``maps[m]`` is the functor over base morphism m and ``markings[b]`` the
    marking of ``fibers[b]``.
    """

    base: FinCat
    fibers: tuple[FinCat, ...]
    maps: tuple[FunctorData, ...]
    markings: tuple[Marking, ...]

    def __post_init__(self) -> None:
        B = self.base
        if len(self.fibers) != B.n_objects or len(self.markings) != B.n_objects:
            raise IllFormed("one fiber and one marking per base object are required")
        if len(self.maps) != B.n_morphisms:
            raise IllFormed("one functor per base morphism is required")
        for b, (F, W) in enumerate(zip(self.fibers, self.markings, strict=True)):
            if W.host != F:
                raise IllFormed(f"marking over {B.objects[b]} is not on its fiber")
        for m, F in enumerate(self.maps):
            if F.source != self.fibers[B.src[m]] or F.target != self.fibers[B.tgt[m]]:
                raise IllFormed(f"functor over {B.names[m]} has the wrong endpoints")
            if B.is_identity(m) and F != identity_functor(self.fibers[B.src[m]]):
                raise IllFormed(f"functor over {B.names[m]} is not an identity")
        for g, f in B.composable_pairs():
            if compose_functors(self.maps[g], self.maps[f]) != self.maps[B.comp[(g, f)]]:
                raise IllFormed(f"functors over {B.names[g]}∘{B.names[f]} do not compose strictly")

    def arrows(self) -> list[int]:
        """Non-identity base morphisms."""
        return [m for m in range(self.base.n_morphisms) if not self.base.is_identity(m)]

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary."""
        B = self.base
        return {
            "base": B.name,
            "fibers": {B.objects[b]: F.name for b, F in enumerate(self.fibers)},
            "maps": {B.names[m]: self.maps[m].name for m in self.arrows()},
        }


def _derive_arrow(
    family: FunctorFamily, m: int, method: MethodChoice, depth: int, max_words: int
) -> DerivedResult:
    B = family.base
    result = left_derived(
        family.maps[m],
        family.markings[B.src[m]],
        family.markings[B.tgt[m]],
        method,
        depth,
        max_words,
    )
    if result.status is DerivedStatus.NOT_CERTIFIED:
        raise NotCertified(result.obstruction or "localization not certified")
    if not result.exists:
        raise HypothesisFailed(
            f"no left derived functor over {B.names[m]}: {result.obstruction}", "arrow", B.names[m]
        )
    return result


def derive_family(
    family: FunctorFamily,
    method: MethodChoice = "auto",
    depth: int = DEFAULT_DEPTH,
    max_words: int = 200_000,
) -> FamilyResult:
    """Derive every arrow of a family and check composites triangle by triangle.

    Raises:
        HypothesisFailed: If an arrow has no left derived functor or a
            triangle 𝐋F(β∘α) ≅ 𝐋F(β)∘𝐋F(α) has no natural isomorphism
        NotCertified: If a localization is not certified
    """
    B = family.base
    localizations: list[LocalizationResult] = []
    for b, (F, W) in enumerate(zip(family.fibers, family.markings, strict=True)):
        L = localize(F, W, method, depth, max_words)
        if not L.certified:
            raise NotCertified(f"localization over {B.objects[b]} is not certified")
        localizations.append(L)

    derived = [_derive_arrow(family, m, method, depth, max_words) for m in range(B.n_morphisms)]
    for m in range(B.n_morphisms):
        if not B.is_identity(m):
            continue
        L = localizations[B.src[m]]
        assert L.localized is not None
        if find_natural_isomorphism(derived[m].require(), identity_functor(L.localized)) is None:
            raise HypothesisFailed(f"derived functor over {B.names[m]} is not an identity", "arrow", B.names[m])

    triangles: dict[tuple[int, int], NatTrans] = {}
    for beta, alpha in B.composable_pairs():
        if B.is_identity(beta) or B.is_identity(alpha):
            continue
        gamma = B.comp[(beta, alpha)]
        composite = compose_functors(derived[beta].require(), derived[alpha].require())
        eta = find_natural_isomorphism(derived[gamma].require(), composite)
        if eta is None:
            cell = f"{B.names[beta]}.{B.names[alpha]}"
            raise HypothesisFailed(f"no natural isomorphism on the triangle {cell}", "triangle", cell)
        triangles[(beta, alpha)] = eta
    logger.info("family_derived", base=B.name, arrows=len(family.arrows()), triangles=len(triangles))
    return FamilyResult(B, tuple(localizations), tuple(derived), triangles)


def derive_adjoint_family(
    family: FunctorFamily,
    rights: dict[int, FunctorData] | None = None,
    method: MethodChoice = "auto",
    depth: int = DEFAULT_DEPTH,
    max_words: int = 200_000,
) -> FamilyResult:
    """derive_family plus a derived adjoint pair over every arrow.

    Right adjoints missing from ``rights`` are searched exhaustively.

    Raises:
        HypothesisFailed: As derive_family, or with kind ``adjoint`` when an
            arrow has no right adjoint
        DerivedMissing: If the right derived functor of an adjoint is missing
    """
    result = derive_family(family, method, depth, max_words)
    B = family.base
    rights = rights or {}
    adjunctions: dict[int, DerivedAdjunction] = {}
    for m in family.arrows():
        f = family.maps[m]
        g = rights.get(m)
        if g is None:
            found = find_right_adjoint(f)
            if found is None:
                raise HypothesisFailed(f"{B.names[m]} has no right adjoint", "adjoint", B.names[m])
            g = found[0]
        pair = derive_adjoint_pair(
            f, g, family.markings[B.src[m]], family.markings[B.tgt[m]], method, depth, max_words
        )
        if pair is None:
            raise HypothesisFailed(f"supplied functor is not right adjoint to {B.names[m]}", "adjoint", B.names[m])
        adjunctions[m] = pair
    return FamilyResult(
        result.base,
        result.localizations,
        result.derived,
        result.triangles,
        adjunctions=adjunctions,
    )
