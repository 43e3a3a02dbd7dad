"""Adjunction witnesses and derived adjoint pairs."""

from __future__ import annotations

from collections.abc import Iterator

from cocart.core.exceptions import DerivedMissing, IllFormed, InternalContradiction, NotCertified
from cocart.core.functor import (
    FunctorData,
    check_functor,
    compose_functors,
    enumerate_functors,
    identity_functor,
    is_bijective,
)
from cocart.core.marking import Marking
from cocart.core.natural import NatTrans, check_natural
from cocart.derived.functors import (
    StagedCorrespondence,
    left_from_witness,
    localization_functor,
    stage_correspondence,
)
from cocart.derived.models import AdjunctionWitness, DerivedAdjunction, DerivedResult, DerivedStatus, Side
from cocart.fibrations.cocartesian import (
    CocartWitness,
    cartesian_obstruction,
    check_cartesian,
    check_cocartesian,
    classify_cartesian,
    cocartesian_obstruction,
)
from cocart.fibrations.grothendieck import grothendieck_cart, grothendieck_cocart
from cocart.localization.engine import DEFAULT_DEPTH, MethodChoice
from cocart.utils.logging import get_logger

logger = get_logger(__name__)


def _triangles_hold(f: FunctorData, g: FunctorData, unit: NatTrans, counit: NatTrans) -> bool:
    C, D = f.source, f.target
    for x in range(C.n_objects):
        if D.comp[(counit.components[f.obj_map[x]], f.mor_map[unit.components[x]])] != D.identity[f.obj_map[x]]:
            return False
    for y in range(D.n_objects):
        if C.comp[(g.mor_map[counit.components[y]], unit.components[g.obj_map[y]])] != C.identity[g.obj_map[y]]:
            return False
    return True


def _universal_arrows(f: FunctorData, g: FunctorData, x: int) -> list[int]:
    """Arrows u: x → g(f(x)) through which Hom(f(x), y) ≅ Hom(x, g(y)) for all y."""
    C, D = f.source, f.target
    fx = f.obj_map[x]
    universal = []
    for u in C.hom(x, g.obj_map[fx]):
        if all(
            len({C.comp[(g.mor_map[b], u)] for b in D.hom(fx, y)}) == len(D.hom(fx, y))
            and len(D.hom(fx, y)) == len(C.hom(x, g.obj_map[y]))
            for y in range(D.n_objects)
        ):
            universal.append(u)
    return universal


def _natural_units(f: FunctorData, g: FunctorData, candidates: list[list[int]]) -> Iterator[tuple[int, ...]]:
    """Choices of universal arrows, one per object, natural along every morphism of C."""
    C = f.source
    checks: list[list[int]] = [[] for _ in range(C.n_objects)]
    for a in range(C.n_morphisms):
        checks[max(C.src[a], C.tgt[a])].append(a)
    chosen = [0] * C.n_objects

    def assign(x: int) -> Iterator[tuple[int, ...]]:
        if x == C.n_objects:
            yield tuple(chosen)
            return
        for u in candidates[x]:
            chosen[x] = u
            if all(
                C.comp[(g.mor_map[f.mor_map[a]], chosen[C.src[a]])] == C.comp[(chosen[C.tgt[a]], a)]
                for a in checks[x]
            ):
                yield from assign(x + 1)

    return assign(0)


def check_adjunction(f: FunctorData, g: FunctorData) -> AdjunctionWitness | None:
    """A unit/counit pair making f ⊣ g, or None.

    Units are assembled from universal arrows x → g(f(x)); the counit at y
    is the arrow transposing to the identity of g(y).

    Raises:
        IllFormed: If g does not go back from the target of f to its source
    """
    if f.source != g.target or f.target != g.source:
        raise IllFormed(f"{g.name or 'g'} does not go back along {f.name or 'f'}")
    C, D = f.source, f.target
    candidates = [_universal_arrows(f, g, x) for x in range(C.n_objects)]
    if not all(candidates):
        return None
    for components in _natural_units(f, g, candidates):
        counit_components: list[int] = []
        for y in range(D.n_objects):
            gy = g.obj_map[y]
            transposing = [
                b for b in D.hom(f.obj_map[gy], y) if C.comp[(g.mor_map[b], components[gy])] == C.identity[gy]
            ]
            if len(transposing) != 1:
                break
            counit_components.append(transposing[0])
        else:
            unit = NatTrans(identity_functor(C), compose_functors(g, f), components)
            counit = NatTrans(compose_functors(f, g), identity_functor(D), tuple(counit_components))
            if not check_natural(counit) and _triangles_hold(f, g, unit, counit):
                return AdjunctionWitness(f, g, unit, counit)
    return None


def find_right_adjoint(f: FunctorData) -> tuple[FunctorData, AdjunctionWitness] | None:
    """First functor g: D → C with f ⊣ g, with its witness."""
    for g in enumerate_functors(f.target, f.source):
        witness = check_adjunction(f, g)
        if witness is not None:
            return g.renamed(g.name or f"{f.name or 'f'}*"), witness
    return None


def adjunction_isomorphism(f: FunctorData, g: FunctorData, witness: AdjunctionWitness) -> FunctorData:
    """The isomorphism E_f ≅ F_g over [1] induced by the unit.

    A cross morphism <x, β: f(x) → y> goes to the cross morphism of F_g
    given by g(β)∘η_x: x → g(y).

    Raises:
        InternalContradiction: If the map is not an isomorphism of categories
    """
    C, D = f.source, f.target
    E_f = grothendieck_cocart(f)
    F_g = grothendieck_cart(g)
    obj_map = tuple(D.n_objects + x for x in range(C.n_objects)) + tuple(range(D.n_objects))
    mor_map = [D.n_morphisms + a for a in range(C.n_morphisms)] + list(range(D.n_morphisms))
    for (_, x, _, beta), m in sorted(E_f.cross_index.items(), key=lambda item: item[1]):
        if m != len(mor_map):
            raise InternalContradiction("cross morphisms of E_f are not contiguous")
        transposed = C.comp[(g.mor_map[beta], witness.unit.components[x])]
        mor_map.append(F_g.cross_index[(0, D.tgt[beta], 1, transposed)])
    iso = FunctorData(E_f.total, F_g.total, obj_map, tuple(mor_map), name="E_f=F_g")
    issues = check_functor(iso)
    if issues or not is_bijective(iso):
        raise InternalContradiction(
            f"{E_f.total.name} and {F_g.total.name} are not identified by the unit"
            + (f": {issues[0]}" if issues else "")
        )
    return iso




def _right_from_witness(
    g: FunctorData,
    W_D: Marking,
    W_C: Marking,
    witness: AdjunctionWitness,
    staged: StagedCorrespondence,
    cartesian: CocartWitness,
) -> DerivedResult:
    """𝐑g read off the cartesian lifts of E′_f; θ_y factors <g(y), ε_y> through the lift into y.

    Raises:
        InternalContradiction: If θ is not determined or not natural
    """
    X, Xp = staged.original, staged.localized
    L_C, L_D = staged.source_localization, staged.target_localization
    classified = classify_cartesian(Xp, cartesian)
    derived = compose_functors(staged.a_C_inv, compose_functors(classified, staged.a_D)).renamed(
        f"R{g.name or 'g'}"
    )
    q_X = localization_functor(Xp)
    offset = g.target.n_objects
    components: list[int] = []
    for y in range(g.source.n_objects):
        image = q_X.mor_map[X.cross_index[(0, g.obj_map[y], 1, witness.counit.components[y])]]
        lift = cartesian.lift(offset + y)
        components.append(staged.a_C_inv.mor_map[staged.factor_before(lift, image, 0)])
    assert L_C.q is not None and L_D.q is not None
    theta = NatTrans(compose_functors(L_C.q, g), compose_functors(derived, L_D.q), tuple(components))
    issues = check_natural(theta)
    if issues:
        raise InternalContradiction(f"θ of {derived.name} is not natural: {issues[0]}")
    return DerivedResult(
        DerivedStatus.EXISTS,
        Side.RIGHT,
        g,
        W_D,
        W_C,
        source_localization=L_D,
        target_localization=L_C,
        localized=Xp,
        derived=derived,
        theta=theta,
        witness=cartesian,
    )


def _derived_witness(
    left: DerivedResult,
    right: DerivedResult,
    staged: StagedCorrespondence,
    cocartesian: CocartWitness,
    cartesian: CocartWitness,
) -> AdjunctionWitness:
    """Unit and counit of 𝐋f ⊣ 𝐑g by composing lifts in E′_f.

    The lift out of x factors through the cartesian lift into its target
    (unit); the cartesian lift into y factors through the lift out of its
    source (counit).

    Raises:
        InternalContradiction: If a factorization or a triangle identity fails
    """
    assert left.derived is not None and right.derived is not None
    Lf, Rg = left.derived, right.derived
    T = staged.localized.total
    unit_components: list[int] = []
    for x in range(Lf.source.n_objects):
        out = cocartesian.lift(x)
        into = cartesian.lift(T.tgt[out])
        unit_components.append(staged.a_C_inv.mor_map[staged.factor_before(into, out, 0)])
    offset = Lf.source.n_objects
    counit_components: list[int] = []
    for y in range(Lf.target.n_objects):
        into = cartesian.lift(offset + y)
        out = cocartesian.lift(T.src[into])
        counit_components.append(staged.a_D_inv.mor_map[staged.factor_after(out, into, 1)])
    unit = NatTrans(identity_functor(Lf.source), compose_functors(Rg, Lf), tuple(unit_components))
    counit = NatTrans(compose_functors(Lf, Rg), identity_functor(Lf.target), tuple(counit_components))
    issues = check_natural(unit) + check_natural(counit)
    if issues:
        raise InternalContradiction(f"derived unit or counit is not natural: {issues[0]}")
    if not _triangles_hold(Lf, Rg, unit, counit):
        raise InternalContradiction(f"{Lf.name} and {Rg.name} fail a triangle identity")
    return AdjunctionWitness(Lf, Rg, unit, counit)


def derive_adjoint_pair(
    f: FunctorData,
    g: FunctorData,
    W_C: Marking,
    W_D: Marking,
    method: MethodChoice = "auto",
    depth: int = DEFAULT_DEPTH,
    max_words: int = 200_000,
) -> DerivedAdjunction | None:
    """Derive an adjoint pair f ⊣ g to 𝐋f ⊣ 𝐑g.

    E_f is localized once; the localized correspondence must be both
    cocartesian (classifying 𝐋f) and cartesian (classifying 𝐑g). Returns
    None when f and g are not adjoint.

    Raises:
        NotCertified: If a localization is not certified
        DerivedMissing: If 𝐋f or 𝐑g does not exist
        InternalContradiction: If E_f ≇ F_g or the derived pair is not adjoint
    """
    witness = check_adjunction(f, g)
    if witness is None:
        logger.info("not_adjoint", left=f.name, right=g.name)
        return None
    comparison = adjunction_isomorphism(f, g, witness)
    staged = stage_correspondence(f, W_C, W_D, method, depth, max_words)
    if isinstance(staged, str):
        raise NotCertified(staged)
    Xp = staged.localized
    T = Xp.total
    cocartesian = check_cocartesian(Xp)
    if cocartesian is None:
        blocked = cocartesian_obstruction(Xp)
        where = "" if blocked is None else f": no cocartesian lift out of {T.objects[blocked]}"
        raise DerivedMissing(f"L{f.name or 'f'} does not exist{where}")
    cartesian = check_cartesian(Xp)
    if cartesian is None:
        blocked = cartesian_obstruction(Xp)
        where = "" if blocked is None else f": no cartesian lift into {T.objects[blocked]}"
        raise DerivedMissing(f"R{g.name or 'g'} does not exist{where}")
    left = left_from_witness(f, W_C, W_D, staged, cocartesian)
    right = _right_from_witness(g, W_D, W_C, witness, staged, cartesian)
    derived_witness = _derived_witness(left, right, staged, cocartesian, cartesian)
    logger.info("derived_adjunction", left=left.functor.name, right=g.name)
    return DerivedAdjunction(left, right, derived_witness, comparison)
