"""Sections of a correspondence over [1]."""

from __future__ import annotations

from cocart.core.category import FinCat, arrow_category, build_category, commuting_squares, full_subcategory
from cocart.core.equivalence import check_equivalence
from cocart.core.exceptions import BadBase, InternalContradiction, NotCocartesian
from cocart.core.functor import FunctorData, check_functor
from cocart.fibrations.cocartesian import CocartWitness, check_cocartesian
from cocart.fibrations.correspondence import Correspondence
from cocart.utils.logging import get_logger

logger = get_logger(__name__)


def _fiber_product(
    F: FunctorData,
) -> tuple[FinCat, dict[tuple[int, int], int], dict[tuple[int, int, tuple[int, int]], int]]:
    E0, E1 = F.source, F.target
    objects = [(x, beta) for x in range(E0.n_objects) for beta in E1.out_of(F.obj_map[x])]
    position = {obj: k for k, obj in enumerate(objects)}
    morphisms: list[tuple[str, int, int]] = []
    pairs: list[tuple[int, int]] = []
    for s, (x, beta) in enumerate(objects):
        for t, (x2, beta2) in enumerate(objects):
            for a in E0.hom(x, x2):
                for b in E1.hom(E1.tgt[beta], E1.tgt[beta2]):
                    if E1.comp[(b, beta)] == E1.comp[(beta2, F.mor_map[a])]:
                        pairs.append((a, b))
                        morphisms.append((f"({E0.names[a]},{E1.names[b]})", s, t))
    index = {(s, t, pair): k for k, ((_, s, t), pair) in enumerate(zip(morphisms, pairs, strict=True))}
    identity = [
        index[(k, k, (E0.identity[x], E1.identity[E1.tgt[beta]]))] for k, (x, beta) in enumerate(objects)
    ]

    def compose(g: int, f: int) -> int:
        a1, b1 = pairs[f]
        a2, b2 = pairs[g]
        return index[(morphisms[f][1], morphisms[g][2], (E0.comp[(a2, a1)], E1.comp[(b2, b1)]))]

    labels = [f"({E0.objects[x]},{E1.names[beta]})" for x, beta in objects]
    category = build_category(labels, morphisms, identity, compose, name=f"{E0.name}x_{E1.name}{E1.name}^[1]")
    return category, position, index


def fiber_product_presentation(F: FunctorData) -> FinCat:
    """E_0 ×_{E_1} E_1^[1] for F: E_0 → E_1.

    Objects are pairs (x, β: F(x) → y); morphisms (a, b) with b∘β = β'∘F(a).
    """
    return _fiber_product(F)[0]


def sections_category(X: Correspondence, w: CocartWitness | None = None) -> FinCat:
    """Category of sections [1] → X over [1].

    Objects are the morphisms from level 0 to level 1 and morphisms are the
    commuting squares between them. The result is checked to be equivalent
    to E_0 ×_{E_1} E_1^[1] built from the classifying functor.

    Raises:
        BadBase: If X is not over [1]
        NotCocartesian: If X is not a cocartesian fibration
        InternalContradiction: If the two descriptions disagree
    """
    if X.base_length != 1:
        raise BadBase("sections are computed over [1]")
    if w is None:
        w = check_cocartesian(X)
    if w is None:
        raise NotCocartesian(f"{X.total.name} is not a cocartesian fibration")
    T = X.total
    cross = X.cross_morphisms(0, 1)
    sections = full_subcategory(arrow_category(T), cross, name=f"Sect({T.name})")
    cross_set = set(cross)
    squares = [sq for sq in commuting_squares(T) if sq[0] in cross_set and sq[1] in cross_set]

    F = w.classifying[0]
    objs0, mors0 = X.fiber_embedding(0)
    _, mors1 = X.fiber_embedding(1)
    obj_pos0 = {x: k for k, x in enumerate(objs0)}
    mor_pos0 = {m: k for k, m in enumerate(mors0)}
    mor_pos1 = {m: k for k, m in enumerate(mors1)}
    presentation, object_index, square_index = _fiber_product(F)

    obj_map: list[int] = []
    for m in cross:
        x = obj_pos0[T.src[m]]
        lift = w.lifts[0][x]
        factors = [c for c in mors1 if T.src[c] == T.tgt[lift] and T.tgt[c] == T.tgt[m] and T.comp[(c, lift)] == m]
        if len(factors) != 1:
            raise InternalContradiction(f"section {T.names[m]} does not factor uniquely through its lift")
        obj_map.append(object_index[(x, mor_pos1[factors[0]])])
    cross_pos = {m: k for k, m in enumerate(cross)}
    mor_map = [
        square_index[(obj_map[cross_pos[f]], obj_map[cross_pos[f2]], (mor_pos0[a], mor_pos1[b]))]
        for f, f2, a, b in squares
    ]
    phi = FunctorData(sections, presentation, tuple(obj_map), tuple(mor_map), name="Phi")
    issues = check_functor(phi)
    if issues or check_equivalence(phi) is None:
        raise InternalContradiction(f"sections of {T.name} are not the expected fiber product")
    logger.debug("sections_computed", correspondence=T.name, objects=sections.n_objects)
    return sections
