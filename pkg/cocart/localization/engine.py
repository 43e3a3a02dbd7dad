"""Localization dispatcher, universal property and localized correspondences."""

from __future__ import annotations

from functools import lru_cache
from typing import Literal

from cocart.core.category import FinCat, inverse
from cocart.core.exceptions import (
    IllFormed,
    InternalContradiction,
    NotCertified,
    NotConverged,
    NotFiberSupported,
    NotInverting,
)
from cocart.core.functor import FunctorData, check_functor, compose_functors
from cocart.core.marking import Marking
from cocart.fibrations.correspondence import Correspondence
from cocart.localization.fractions import check_right_fractions, localize_fractions
from cocart.localization.models import Fraction, LocalizationResult
from cocart.localization.zigzag import localize_zigzag
from cocart.utils.logging import get_logger

logger = get_logger(__name__)

MethodChoice = Literal["auto", "fractions", "zigzag"]

DEFAULT_DEPTH = 6


@lru_cache(maxsize=256)
def localize(
    C: FinCat,
    W: Marking,
    method: MethodChoice = "auto",
    depth: int = DEFAULT_DEPTH,
    max_words: int = 200_000,
) -> LocalizationResult:
    """Localize C at the marking W.

    ``auto`` uses fractions whenever they hold and otherwise falls back to
    the zig-zag engine with a notice.

    Raises:
        NoFractions: If ``fractions`` is forced and the conditions fail
        IllFormed: If W is a marking of another category
        BudgetExceeded: If the zig-zag enumeration is too large
    """
    if W.host != C:
        raise IllFormed(f"marking is not on {C.name}")
    if method == "fractions":
        return localize_fractions(C, W)
    if method == "zigzag":
        return localize_zigzag(C, W, depth, max_words)
    report = check_right_fractions(C, W)
    if report.ok:
        return localize_fractions(C, W)
    logger.info("localization_fallback", category=C.name, reason=report.describe(), depth=depth)
    result = localize_zigzag(C, W, depth, max_words)
    return LocalizationResult(
        source=result.source,
        marking=result.marking,
        localized=result.localized,
        q=result.q,
        method=result.method,
        certificates=result.certificates,
        depth=result.depth,
        converged=result.converged,
        notes=(f"fractions unavailable: {report.describe()}",),
    )


def _certificate_image(L: LocalizationResult, h: FunctorData, m: int, start: int) -> int:
    X = h.target
    cert = L.certificates[m]
    if isinstance(cert, Fraction):
        inv = inverse(X, h.mor_map[cert.backward])
        if inv is None:
            raise NotInverting(f"{h.name or 'functor'} does not invert {L.source.names[cert.backward]}")
        return X.comp[(h.mor_map[cert.forward], inv)]
    image = X.identity[start]
    for letter in cert:
        step = h.mor_map[letter.morphism]
        if letter.inverse:
            step_inv = inverse(X, step)
            if step_inv is None:
                raise NotInverting(f"{h.name or 'functor'} does not invert {L.source.names[letter.morphism]}")
            step = step_inv
        image = X.comp[(step, image)]
    return image


def induced_functor(L: LocalizationResult, h: FunctorData) -> FunctorData:
    """The unique h' with h'∘q = h for a W-inverting h.

    Certificates are evaluated in the target of h: a fraction a∘s⁻¹ goes to
    h(a)∘h(s)⁻¹ and a word to the composite of its letters.

    Raises:
        IllFormed: If h does not start at the localized category's source
        NotCertified: If L is not a certified localization
        NotInverting: If h does not send W to isomorphisms
        InternalContradiction: If the factorization is not a functor through q
    """
    if h.source != L.source:
        raise IllFormed(f"{h.name or 'functor'} does not start at {L.source.name}")
    if not L.certified or L.localized is None or L.q is None:
        raise NotCertified(f"localization of {L.source.name} is not certified")
    if not L.marking.inverts(h):
        raise NotInverting(f"{h.name or 'functor'} does not invert the marking")
    L_cat = L.localized
    mor_map = tuple(
        _certificate_image(L, h, m, h.obj_map[L_cat.src[m]]) for m in range(L_cat.n_morphisms)
    )
    induced = FunctorData(L_cat, h.target, h.obj_map, mor_map, name=f"{h.name or 'h'}'")
    issues = check_functor(induced)
    if issues or compose_functors(induced, L.q).mor_map != h.mor_map:
        raise InternalContradiction(f"{induced.name} does not factor {h.name or 'functor'} through q")
    return induced


def check_fiber_supported(X: Correspondence, W: Marking) -> None:
    """Raise NotFiberSupported unless every member of W stays in one fiber."""
    T = X.total
    for m in W:
        i, j = X.morphism_degrees(m)
        if i != j:
            raise NotFiberSupported(f"{T.names[m]} joins levels {i} and {j}")


def localize_correspondence(
    X: Correspondence,
    W: Marking,
    method: MethodChoice = "auto",
    depth: int = DEFAULT_DEPTH,
    max_words: int = 200_000,
) -> Correspondence:
    """Localize the total category of X at a fiberwise marking.

    Objects are kept, so the degree function carries over; the
    LocalizationResult is attached as ``localization``.

    Raises:
        NotFiberSupported: If W marks a morphism between different levels
        NotConverged: If the zig-zag fallback is not certified
    """
    if W.host != X.total:
        raise IllFormed("marking is not on the total category")
    check_fiber_supported(X, W)
    result = localize(X.total, W, method, depth, max_words)
    if not result.certified or result.localized is None:
        raise NotConverged(
            f"localization of {X.total.name} did not converge at depth {depth}", result
        )
    localized = result.localized.renamed(f"{X.total.name}'")
    logger.debug("correspondence_localized", correspondence=X.total.name, method=result.method.value)
    return Correspondence(localized, X.base_length, X.degree, localization=result)
