"""Brute-force (co)cartesian fibration tests and (lax) bifibrations over B×C."""

from __future__ import annotations

from collections.abc import Callable, Container

from cocart.core.category import FinCat, is_isomorphism, product
from cocart.core.exceptions import IllFormed, InternalContradiction
from cocart.core.functor import FunctorData, compose_functors, dual_functor, projection
from cocart.utils.logging import get_logger

logger = get_logger(__name__)


def _objects_within(X: FinCat, within: Container[int] | None) -> list[int]:
    if within is None:
        return list(range(X.n_objects))
    return [z for z in range(X.n_objects) if X.identity[z] in within]


def is_cartesian_morphism(F: FunctorData, phi: int, within: Container[int] | None = None) -> bool:
    """Check that φ: x → y is F-cartesian.

    For every z, χ ↦ (φ∘χ, F(χ)) must biject Hom(z, x) onto the pairs
    (ψ: z → y, g: Fz → Fx) with F(φ)∘g = F(ψ). With ``within`` the test is
    made inside the subcategory with that set of morphisms.
    """
    X, B = F.source, F.target
    x, y = X.src[phi], X.tgt[phi]

    def hom(a: int, b: int) -> list[int]:
        return [m for m in X.hom(a, b) if within is None or m in within]

    f_phi = F.mor_map[phi]
    for z in _objects_within(X, within):
        fz, fx = F.obj_map[z], F.obj_map[x]
        pairs = {
            (psi, g)
            for psi in hom(z, y)
            for g in B.hom(fz, fx)
            if B.comp[(f_phi, g)] == F.mor_map[psi]
        }
        chis = hom(z, x)
        image = {(X.comp[(phi, chi)], F.mor_map[chi]) for chi in chis}
        if len(image) != len(chis) or image != pairs:
            return False
    return True


def is_cocartesian_morphism(F: FunctorData, phi: int, within: Container[int] | None = None) -> bool:
    """Check that φ is F-cocartesian (F^op-cartesian)."""
    return is_cartesian_morphism(dual_functor(F), phi, within)


def cartesian_lift(F: FunctorData, y: int, beta: int) -> int | None:
    """Least F-cartesian φ with target y and F(φ) = β, if any."""
    X = F.source
    for phi in X.into(y):
        if F.mor_map[phi] == beta and is_cartesian_morphism(F, phi):
            return phi
    return None


def cocartesian_lift(F: FunctorData, x: int, gamma: int) -> int | None:
    """Least F-cocartesian φ with source x and F(φ) = γ, if any."""
    return cartesian_lift(dual_functor(F), x, gamma)


def is_cartesian_fibration(F: FunctorData) -> bool:
    """True iff every arrow into F(y) has a cartesian lift ending at y."""
    X, B = F.source, F.target
    return all(
        cartesian_lift(F, y, beta) is not None
        for y in range(X.n_objects)
        for beta in B.into(F.obj_map[y])
    )


def is_cocartesian_fibration(F: FunctorData) -> bool:
    """True iff every arrow out of F(x) has a cocartesian lift starting at x."""
    return is_cartesian_fibration(dual_functor(F))


def _components(p: FunctorData, B: FinCat, C: FinCat) -> tuple[FunctorData, FunctorData]:
    if p.target != product(B, C):
        raise IllFormed(f"{p.name or 'functor'} does not land in {B.name}x{C.name}")
    return compose_functors(projection(B, C, 0), p), compose_functors(projection(B, C, 1), p)


def check_lax_bifibration(p: FunctorData, B: FinCat, C: FinCat) -> bool:
    """True iff p: X → B×C is a lax bifibration.

    p_B must be a cartesian and p_C a cocartesian fibration, p_B-cartesian
    arrows must map to isomorphisms under p_C and p_C-cocartesian arrows to
    isomorphisms under p_B.

    Raises:
        IllFormed: If p does not land in B×C
    """
    p_B, p_C = _components(p, B, C)
    if not is_cartesian_fibration(p_B):
        logger.debug("lax_bifibration_failed", reason="p_B is not a cartesian fibration")
        return False
    if not is_cocartesian_fibration(p_C):
        logger.debug("lax_bifibration_failed", reason="p_C is not a cocartesian fibration")
        return False
    X = p.source
    for phi in range(X.n_morphisms):
        if is_cartesian_morphism(p_B, phi) and not _is_iso_image(p_C, phi):
            logger.debug("lax_bifibration_failed", reason="p_C of a cartesian arrow", arrow=X.names[phi])
            return False
        if is_cocartesian_morphism(p_C, phi) and not _is_iso_image(p_B, phi):
            logger.debug("lax_bifibration_failed", reason="p_B of a cocartesian arrow", arrow=X.names[phi])
            return False
    return True


def _is_iso_image(F: FunctorData, phi: int) -> bool:
    return is_isomorphism(F.target, F.mor_map[phi])


def _fiber_morphisms(F: FunctorData, value: int) -> frozenset[int]:
    """Morphisms sent by F to the identity of ``value``."""
    target_id = F.target.identity[value]
    return frozenset(m for m, n in enumerate(F.mor_map) if n == target_id)


def _unique_filler(
    X: FinCat, src: int, tgt: int, allowed: frozenset[int], condition: Callable[[int], bool]
) -> int:
    matches = [chi for chi in X.hom(src, tgt) if chi in allowed and condition(chi)]
    if len(matches) != 1:
        raise InternalContradiction("transport along a chosen lift is not unique")
    return matches[0]


def _pullbacks_preserve(p_B: FunctorData, p_C: FunctorData) -> bool:
    """β^! carries fiberwise p_C-cocartesian arrows to fiberwise p_C-cocartesian arrows."""
    X, B = p_B.source, p_B.target
    for b2 in range(B.n_objects):
        source_fiber = _fiber_morphisms(p_B, b2)
        for phi in sorted(source_fiber):
            if X.is_identity(phi) or not is_cocartesian_morphism(p_C, phi, source_fiber):
                continue
            y, y2 = X.src[phi], X.tgt[phi]
            for beta in B.into(b2):
                b = B.src[beta]
                r_y = cartesian_lift(p_B, y, beta)
                r_y2 = cartesian_lift(p_B, y2, beta)
                assert r_y is not None and r_y2 is not None
                target_fiber = _fiber_morphisms(p_B, b)
                chi = _unique_filler(
                    X,
                    X.src[r_y],
                    X.src[r_y2],
                    target_fiber,
                    lambda c, r_y=r_y, r_y2=r_y2, phi=phi: X.comp[(r_y2, c)] == X.comp[(phi, r_y)],
                )
                if not is_cocartesian_morphism(p_C, chi, target_fiber):
                    return False
    return True


def _pushforwards_preserve(p_B: FunctorData, p_C: FunctorData) -> bool:
    """γ_! carries fiberwise p_B-cartesian arrows to fiberwise p_B-cartesian arrows."""
    X, C = p_C.source, p_C.target
    for c in range(C.n_objects):
        source_fiber = _fiber_morphisms(p_C, c)
        for phi in sorted(source_fiber):
            if X.is_identity(phi) or not is_cartesian_morphism(p_B, phi, source_fiber):
                continue
            y, y2 = X.src[phi], X.tgt[phi]
            for gamma in C.out_of(c):
                c2 = C.tgt[gamma]
                l_y = cocartesian_lift(p_C, y, gamma)
                l_y2 = cocartesian_lift(p_C, y2, gamma)
                assert l_y is not None and l_y2 is not None
                target_fiber = _fiber_morphisms(p_C, c2)
                chi = _unique_filler(
                    X,
                    X.tgt[l_y],
                    X.tgt[l_y2],
                    target_fiber,
                    lambda k, l_y=l_y, l_y2=l_y2, phi=phi: X.comp[(k, l_y)] == X.comp[(l_y2, phi)],
                )
                if not is_cartesian_morphism(p_B, chi, target_fiber):
                    return False
    return True


def check_bifibration(p: FunctorData, B: FinCat, C: FinCat) -> bool:
    """True iff p is a lax bifibration whose transports preserve (co)cartesian arrows.

    Both equivalent preservation conditions are evaluated.

    Raises:
        IllFormed: If p does not land in B×C
        InternalContradiction: If the two preservation conditions disagree
    """
    if not check_lax_bifibration(p, B, C):
        return False
    p_B, p_C = _components(p, B, C)
    pullbacks = _pullbacks_preserve(p_B, p_C)
    pushforwards = _pushforwards_preserve(p_B, p_C)
    if pullbacks != pushforwards:
        raise InternalContradiction(
            f"bifibration conditions disagree (β^!: {pullbacks}, γ_!: {pushforwards})"
        )
    return pullbacks
