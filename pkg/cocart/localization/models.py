"""Data models for localizations."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Any

from cocart.core.category import FinCat
from cocart.core.exceptions import NotConverged
from cocart.core.functor import FunctorData
from cocart.core.marking import Marking


class Method(Enum):
    """Localization engine."""

    FRACTIONS = "fractions"
    ZIGZAG = "zigzag"


@dataclass(frozen=True)
class Fraction:
    """The morphism a∘s⁻¹: x → y given by a span x ← apex → y with s in W."""

    apex: int
    backward: int
    forward: int

    def render(self, C: FinCat) -> str:
        """Human-readable form, e.g. ``a.s^-1``."""
        s, a = C.names[self.backward], C.names[self.forward]
        if C.is_identity(self.backward):
            return a
        if C.is_identity(self.forward):
            return f"{s}^-1"
        return f"{a}.{s}^-1"

    def to_dict(self, C: FinCat) -> dict[str, Any]:
        """Convert to dictionary using names of C."""
        return {
            "apex": C.objects[self.apex],
            "backward": C.names[self.backward],
            "forward": C.names[self.forward],
        }


@dataclass(frozen=True)
class Letter:
    """One step of a zig-zag: a morphism of C or the formal inverse of a W-morphism."""

    morphism: int
    inverse: bool = False

    def render(self, C: FinCat) -> str:
        """Name of the step."""
        return f"{C.names[self.morphism]}^-1" if self.inverse else C.names[self.morphism]


Word = tuple[Letter, ...]
Certificate = Fraction | Word


def render_word(C: FinCat, word: Word) -> str:
    """Render a word (application order) right to left, as a composite."""
    if not word:
        return "id"
    return ".".join(letter.render(C) for letter in reversed(word))


@dataclass(frozen=True)
class ResolutionCategory:
    """The category L_x of W-arrows s: x' → x and commuting triangles.

    ``arrows[k]`` is the W-arrow for object k; ``triangles[m]`` is the
    C-morphism u of morphism m, with s₂∘u = s₁.
    """

    target: int
    category: FinCat
    arrows: tuple[int, ...]
    triangles: tuple[int, ...]


@dataclass(frozen=True)
class LocalizationResult:
    """A localization C → C[W⁻¹] with its certificates.

    For the zig-zag engine ``localized`` and ``q`` are None when some
    composite of representatives is longer than the explored depth.
    """

    source: FinCat
    marking: Marking
    localized: FinCat | None
    q: FunctorData | None
    method: Method
    certificates: tuple[Certificate, ...]
    depth: int | None = None
    converged: bool = True
    notes: tuple[str, ...] = field(default=(), compare=False)

    @property
    def certified(self) -> bool:
        """True for fraction results and converged, complete zig-zag results."""
        if self.method is Method.FRACTIONS:
            return True
        return self.converged and self.localized is not None

    def require_certified(self) -> LocalizationResult:
        """Return self or raise NotConverged.

        Raises:
            NotConverged: If the result is not certified
        """
        if not self.certified:
            raise NotConverged(
                f"zig-zag localization of {self.source.name} did not converge at depth {self.depth}",
                self,
            )
        return self

    def certificate_text(self, m: int) -> str:
        """Render the certificate of a localized morphism."""
        cert = self.certificates[m]
        if isinstance(cert, Fraction):
            return cert.render(self.source)
        return render_word(self.source, cert)

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary."""
        data: dict[str, Any] = {
            "source": self.source.name,
            "method": self.method.value,
            "certified": self.certified,
            "converged": self.converged,
            "depth": self.depth,
            "marking": self.marking.to_dict()["members"],
            "morphism_count": len(self.certificates),
        }
        if self.localized is not None:
            data["localized"] = self.localized.to_dict()
            data["certificates"] = {
                self.localized.names[m]: self.certificate_text(m) for m in range(self.localized.n_morphisms)
            }
        if self.q is not None:
            data["q"] = self.q.to_dict()["morphisms"]
        if self.notes:
            data["notes"] = list(self.notes)
        return data
