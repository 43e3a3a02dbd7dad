"""Derived functors of composites through the correspondence over [2]."""

from __future__ import annotations

from cocart.core.equivalence import check_equivalence
from cocart.core.exceptions import InternalContradiction, NotCertified, NotConverged
from cocart.core.functor import FunctorData, compose_functors
from cocart.core.marking import Marking
from cocart.core.natural import find_natural_isomorphism
from cocart.derived.functors import (
    fiber_marking,
    left_derived,
    localization_functor,
    localized_chain,
)
from cocart.derived.models import DerivedStatus, PairCompositionReport
from cocart.fibrations.cocartesian import check_cocartesian
from cocart.fibrations.composition import check_flat_over_triangle
from cocart.fibrations.correspondence import Correspondence
from cocart.fibrations.grothendieck import grothendieck_cocart
from cocart.localization.engine import DEFAULT_DEPTH, MethodChoice, induced_functor, localize
from cocart.utils.logging import get_logger

logger = get_logger(__name__)


def _outer_map(X: Correspondence, Xp: Correspondence, gf: FunctorData) -> FunctorData:
    """E_{g∘f} → δ¹E′: the outer face of the chain followed by q."""
    C0, C1, C2 = X.fiber(0), X.fiber(1), X.fiber(2)
    E_gf = grothendieck_cocart(gf)
    q = localization_functor(Xp)
    T = Xp.total
    outer = Xp.restrict((0, 2))
    kept = [m for m in range(T.n_morphisms) if 1 not in Xp.morphism_degrees(m)]
    position = {m: k for k, m in enumerate(kept)}

    n0 = C0.n_objects
    obj_map = tuple(range(n0)) + tuple(n0 + z for z in range(C2.n_objects))
    to_chain = list(range(C0.n_morphisms))
    to_chain += [C0.n_morphisms + C1.n_morphisms + b for b in range(C2.n_morphisms)]
    for (_, x, _, beta), m in sorted(E_gf.cross_index.items(), key=lambda item: item[1]):
        if m != len(to_chain):
            raise InternalContradiction(f"cross morphisms of {E_gf.total.name} are not contiguous")
        to_chain.append(X.cross_index[(0, x, 2, beta)])
    mor_map = tuple(position[q.mor_map[m]] for m in to_chain)
    return FunctorData(E_gf.total, outer.total, obj_map, mor_map, name="outer")


def derive_pair_composition(
    f: FunctorData,
    g: FunctorData,
    W0: Marking,
    W1: Marking,
    W2: Marking,
    method: MethodChoice = "auto",
    depth: int = DEFAULT_DEPTH,
    max_words: int = 200_000,
) -> PairCompositionReport:
    """Compare 𝐋g∘𝐋f with 𝐋(g∘f) through the localized chain f, g.

    The canonical map E′_{g∘f} → δ¹E′ is tested for being an equivalence;
    when it is and all three derived functors exist they must agree up
    to natural isomorphism.

    Raises:
        NotCertified: If a localization is not certified
        InternalContradiction: If the composite disagrees with 𝐋(g∘f)
    """
    gf = compose_functors(g, f).renamed(f"{g.name or 'g'}{f.name or 'f'}")
    try:
        X, Xp = localized_chain([f, g], [W0, W1, W2], method, depth, max_words)
    except NotConverged as e:
        raise NotCertified(str(e)) from e
    flat = check_flat_over_triangle(Xp)
    if not flat:
        logger.warning("localized_not_flat", correspondence=Xp.total.name)
    cocartesian = check_cocartesian(Xp) is not None

    E_gf = grothendieck_cocart(gf)
    L_gf = localize(E_gf.total, fiber_marking(E_gf, [W0, W2]), method, depth, max_words)
    if not L_gf.certified:
        raise NotCertified(f"localization of {E_gf.total.name} is not certified")
    comparison = induced_functor(L_gf, _outer_map(X, Xp, gf))
    equivalence = check_equivalence(comparison) is not None

    left_f = left_derived(f, W0, W1, method, depth, max_words)
    left_g = left_derived(g, W1, W2, method, depth, max_words)
    left_gf = left_derived(gf, W0, W2, method, depth, max_words)
    for result in (left_f, left_g, left_gf):
        if result.status is DerivedStatus.NOT_CERTIFIED:
            raise NotCertified(result.obstruction or "localization not certified")

    composite_iso = None
    if equivalence and left_f.exists and left_g.exists and left_gf.exists:
        assert left_f.derived is not None and left_g.derived is not None and left_gf.derived is not None
        composite_iso = find_natural_isomorphism(
            compose_functors(left_g.derived, left_f.derived), left_gf.derived
        )
        if composite_iso is None:
            raise InternalContradiction(f"L{g.name or 'g'}∘L{f.name or 'f'} is not isomorphic to L{gf.name}")
    logger.info(
        "pair_composition_compared",
        functors=[f.name, g.name],
        flat=flat,
        cocartesian=cocartesian,
        equivalence=equivalence,
    )
    return PairCompositionReport(
        flat=flat,
        cocartesian=cocartesian,
        equivalence=equivalence,
        left_f=left_f,
        left_g=left_g,
        left_gf=left_gf,
        composite_iso=composite_iso,
    )
