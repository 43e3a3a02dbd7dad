"""Result types for derived functors, adjunctions and families."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any

from cocart.core.category import FinCat
from cocart.core.exceptions import DerivedMissing, NotCertified
from cocart.core.functor import FunctorData
from cocart.core.marking import Marking
from cocart.core.natural import NatTrans
from cocart.fibrations.cocartesian import CocartWitness
from cocart.fibrations.correspondence import Correspondence
from cocart.localization.models import LocalizationResult


class DerivedStatus(Enum):
    """Outcome of a derived-functor computation."""

    EXISTS = "exists"
    FAILS_COCARTESIAN = "fails_cocartesian"
    NOT_CERTIFIED = "not_certified"


class Side(Enum):
    """Which derived functor was computed."""

    LEFT = "left"
    RIGHT = "right"


@dataclass(frozen=True)
class DerivedResult:
    """A left or right derived functor between canonical localizations.

    For a left derived functor ``theta`` goes from derived∘q_C to q_D∘f;
    for a right derived functor from q_D∘f to derived∘q_C.
    """

    status: DerivedStatus
    side: Side
    functor: FunctorData
    source_marking: Marking
    target_marking: Marking
    source_localization: LocalizationResult | None = None
    target_localization: LocalizationResult | None = None
    localized: Correspondence | None = field(default=None, compare=False)
    derived: FunctorData | None = None
    theta: NatTrans | None = None
    witness: CocartWitness | None = field(default=None, compare=False)
    obstruction: str | None = None
    method: str = "pipeline"

    @property
    def exists(self) -> bool:
        """True iff the derived functor was found."""
        return self.status is DerivedStatus.EXISTS

    @property
    def q_C(self) -> FunctorData | None:
        """Localization functor of the source."""
        return None if self.source_localization is None else self.source_localization.q

    @property
    def q_D(self) -> FunctorData | None:
        """Localization functor of the target."""
        return None if self.target_localization is None else self.target_localization.q

    def require(self) -> FunctorData:
        """Return the derived functor or raise.

        Raises:
            NotCertified: If a localization was not certified
            DerivedMissing: If the derived functor does not exist
        """
        if self.status is DerivedStatus.NOT_CERTIFIED:
            raise NotCertified(self.obstruction or "localization not certified")
        if self.derived is None:
            raise DerivedMissing(
                f"{self.side.value} derived functor of {self.functor.name or 'f'} does not exist"
                + (f": {self.obstruction}" if self.obstruction else "")
            )
        return self.derived

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary."""
        data: dict[str, Any] = {
            "status": self.status.value,
            "side": self.side.value,
            "functor": self.functor.name,
            "method": self.method,
        }
        if self.derived is not None:
            data["derived"] = self.derived.to_dict()
        if self.theta is not None:
            data["theta"] = self.theta.to_dict()
        if self.obstruction is not None:
            data["obstruction"] = self.obstruction
        if self.localized is not None:
            data["localized"] = self.localized.to_dict()
        return data


@dataclass(frozen=True)
class AdjunctionWitness:
    """Unit id ⇒ g∘f and counit f∘g ⇒ id satisfying both triangle identities."""

    left: FunctorData
    right: FunctorData
    unit: NatTrans
    counit: NatTrans

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary."""
        return {
            "left": self.left.name,
            "right": self.right.name,
            "unit": self.unit.to_dict(),
            "counit": self.counit.to_dict(),
        }


@dataclass(frozen=True)
class DerivedAdjunction:
    """A derived adjoint pair 𝐋f ⊣ 𝐑g with its witness."""

    left: DerivedResult
    right: DerivedResult
    witness: AdjunctionWitness
    comparison: FunctorData

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary."""
        return {
            "left": self.left.to_dict(),
            "right": self.right.to_dict(),
            "witness": self.witness.to_dict(),
        }


@dataclass(frozen=True)
class PairCompositionReport:
    """Comparison of 𝐋g∘𝐋f with 𝐋(g∘f) through the [2]-correspondence."""

    flat: bool
    cocartesian: bool
    equivalence: bool
    left_f: DerivedResult
    left_g: DerivedResult
    left_gf: DerivedResult
    composite_iso: NatTrans | None = None

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary."""
        return {
            "flat": self.flat,
            "cocartesian": self.cocartesian,
            "comparison_is_equivalence": self.equivalence,
            "left_f": self.left_f.status.value,
            "left_g": self.left_g.status.value,
            "left_gf": self.left_gf.status.value,
            "composite_iso": None if self.composite_iso is None else self.composite_iso.to_dict(),
        }


@dataclass(frozen=True)
class FamilyResult:
    """The derived family F′: b ↦ F(b)′, α ↦ 𝐋F(α).

    ``derived[m]`` belongs to morphism m of the base; ``triangles`` maps
    (β, α) to a natural isomorphism 𝐋F(β∘α) ≅ 𝐋F(β)∘𝐋F(α).
    """

    base: FinCat
    localizations: tuple[LocalizationResult, ...]
    derived: tuple[DerivedResult, ...]
    triangles: dict[tuple[int, int], NatTrans] = field(compare=False)
    adjunctions: dict[int, DerivedAdjunction] | None = field(default=None, compare=False)

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary."""
        B = self.base
        data: dict[str, Any] = {
            "base": B.name,
            "fibers": {
                B.objects[b]: L.localized.name if L.localized is not None else None
                for b, L in enumerate(self.localizations)
            },
            "derived": {
                B.names[m]: r.derived.to_dict() if r.derived is not None else None
                for m, r in enumerate(self.derived)
                if not B.is_identity(m)
            },
            "triangles": sorted(f"{B.names[b]}.{B.names[a]}" for b, a in self.triangles),
        }
        if self.adjunctions is not None:
            data["adjunctions"] = {B.names[m]: adj.witness.to_dict() for m, adj in self.adjunctions.items()}
        return data
