"""Existence of left derived functors through a resolving functor i: C₀ → C."""

from __future__ import annotations

from cocart.core.equivalence import check_equivalence, quasi_inverse
from cocart.core.exceptions import BulletFailed, InternalContradiction, NotConverged
from cocart.core.functor import FunctorData, check_functor, compose_functors
from cocart.core.marking import Marking
from cocart.core.natural import (
    NatTrans,
    find_natural_isomorphism,
    vertical_compose,
    whisker_left,
)
from cocart.derived.functors import left_derived, localization_functor, localized_chain
from cocart.derived.kan import right_kan_extension
from cocart.derived.models import DerivedResult, DerivedStatus, Side
from cocart.fibrations.correspondence import Correspondence
from cocart.fibrations.grothendieck import grothendieck_cocart
from cocart.localization.engine import DEFAULT_DEPTH, MethodChoice, induced_functor, localize
from cocart.utils.logging import get_logger

logger = get_logger(__name__)


def _theta_map(
    X: Correspondence,
    target: Correspondence,
    q_C: FunctorData,
    q_D: FunctorData,
    theta: NatTrans,
) -> FunctorData:
    """E_f → E_{f′}: fibers through q_C and q_D, <x, β> to <x, q_D(β)∘θ_x>."""
    Dp = q_D.target
    n_src = q_C.target.n_objects
    m_src = q_C.target.n_morphisms
    obj_map = tuple(q_C.obj_map) + tuple(n_src + y for y in q_D.obj_map)
    mor_map = list(q_C.mor_map) + [m_src + b for b in q_D.mor_map]
    for (_, x, _, beta), m in sorted(X.cross_index.items(), key=lambda item: item[1]):
        if m != len(mor_map):
            raise InternalContradiction(f"cross morphisms of {X.total.name} are not contiguous")
        image = Dp.comp[(q_D.mor_map[beta], theta.components[x])]
        mor_map.append(target.cross_index[(0, q_C.obj_map[x], 1, image)])
    return FunctorData(X.total, target.total, obj_map, tuple(mor_map), name="theta")


def _alpha_map(X0: Correspondence, X: Correspondence, i: FunctorData) -> FunctorData:
    """E_{f∘i} → E_f induced by the square (i, id_D)."""
    C0, C = i.source, i.target
    D = X.fiber(1)
    obj_map = tuple(i.obj_map) + tuple(C.n_objects + y for y in range(D.n_objects))
    mor_map = list(i.mor_map) + [C.n_morphisms + b for b in range(D.n_morphisms)]
    for (_, x, _, beta), m in sorted(X0.cross_index.items(), key=lambda item: item[1]):
        if m != len(mor_map):
            raise InternalContradiction(f"cross morphisms of {X0.total.name} are not contiguous")
        mor_map.append(X.cross_index[(0, i.obj_map[x], 1, beta)])
    assert len(obj_map) == C0.n_objects + D.n_objects
    return FunctorData(X0.total, X.total, obj_map, tuple(mor_map), name="alpha")


def _not_certified(f: FunctorData, W_C: Marking, W_D: Marking, reason: str) -> DerivedResult:
    logger.info("derived_unavailable", functor=f.name, reason=reason)
    return DerivedResult(
        DerivedStatus.NOT_CERTIFIED,
        Side.LEFT,
        f,
        W_C,
        W_D,
        obstruction=reason,
        method="resolution",
    )


def _checked(F: FunctorData, bullet: int) -> FunctorData:
    issues = check_functor(F)
    if issues:
        raise BulletFailed(f"{F.name} is not a functor: {issues[0]}", bullet)
    return F


def derive_via_resolution(
    f: FunctorData,
    i: FunctorData,
    W_C: Marking,
    W_D: Marking,
    method: MethodChoice = "auto",
    depth: int = DEFAULT_DEPTH,
    max_words: int = 200_000,
    cross_check: bool = True,
) -> DerivedResult:
    """𝐋f = (f∘i)′∘i′⁻¹, after checking the three existence conditions.

    1. f∘i carries W₀ = i⁻¹(W_C) into W_D.
    2. i induces an equivalence i′: C₀′ → C′.
    3. A right Kan extension (f′, θ) of q_D∘f along q_C exists and
       θ′∘α′: E′_{f∘i} → E′_f → E_{f′} is an equivalence.

    Raises:
        BulletFailed: With the number of the first failing condition
        InternalContradiction: If the result disagrees with left_derived
    """
    if i.target != f.source:
        raise BulletFailed(f"{i.name or 'i'} does not land in {f.source.name}", 1)
    W0 = W_C.preimage(i)
    fi = compose_functors(f, i).renamed(f"{f.name or 'f'}{i.name or 'i'}")
    if not W0.maps_into(fi, W_D):
        raise BulletFailed(f"{fi.name} does not carry W_0 into W_D", 1)

    L0 = localize(i.source, W0, method, depth, max_words)
    L_C = localize(f.source, W_C, method, depth, max_words)
    L_D = localize(f.target, W_D, method, depth, max_words)
    if not (L0.certified and L_C.certified and L_D.certified):
        return _not_certified(f, W_C, W_D, "fiber localization not certified")
    assert L_C.q is not None and L_D.q is not None
    q_C, q_D = L_C.q, L_D.q

    i_prime = induced_functor(L0, compose_functors(q_C, i)).renamed(f"{i.name or 'i'}'")
    equivalence = check_equivalence(i_prime)
    if equivalence is None:
        raise BulletFailed(f"{i_prime.name} is not an equivalence", 2)

    kan = right_kan_extension(compose_functors(q_D, f), q_C)
    if kan is None:
        raise BulletFailed(f"no right Kan extension of q_D∘{f.name or 'f'} along q_C", 3)
    f_prime, theta = kan
    try:
        X0, X0p = localized_chain([fi], [W0, W_D], method, depth, max_words)
        X, Xp = localized_chain([f], [W_C, W_D], method, depth, max_words)
    except NotConverged:
        return _not_certified(f, W_C, W_D, "localized correspondence not certified")
    E_fp = grothendieck_cocart(f_prime)
    theta_map = _checked(_theta_map(X, E_fp, q_C, q_D, theta), 3)
    alpha = _checked(_alpha_map(X0, X, i), 3)
    alpha_prime = induced_functor(X0p.localization, compose_functors(localization_functor(Xp), alpha))
    theta_prime = induced_functor(Xp.localization, theta_map)
    if check_equivalence(compose_functors(theta_prime, alpha_prime)) is None:
        raise BulletFailed("θ′∘α′ is not an equivalence", 3)

    fi_prime = induced_functor(L0, compose_functors(q_D, fi))
    derived = compose_functors(fi_prime, quasi_inverse(i_prime, equivalence)).renamed(f"L{f.name or 'f'}")
    to_kan = find_natural_isomorphism(derived, f_prime)
    if to_kan is None:
        raise InternalContradiction(f"{derived.name} is not isomorphic to the Kan extension")
    theta_derived = vertical_compose(theta, whisker_left(to_kan, q_C))

    if cross_check:
        other = left_derived(f, W_C, W_D, method, depth, max_words)
        if other.status is DerivedStatus.FAILS_COCARTESIAN:
            raise InternalContradiction(f"left derived functor of {f.name or 'f'} missing despite a resolution")
        if other.exists:
            assert other.derived is not None
            if find_natural_isomorphism(other.derived, derived) is None:
                raise InternalContradiction("resolution and correspondence pipelines disagree")
    logger.info("derived_computed", functor=f.name, side=Side.LEFT.value, method="resolution")
    return DerivedResult(
        DerivedStatus.EXISTS,
        Side.LEFT,
        f,
        W_C,
        W_D,
        source_localization=L_C,
        target_localization=L_D,
        localized=Xp,
        derived=derived,
        theta=theta_derived,
        method="resolution",
    )
