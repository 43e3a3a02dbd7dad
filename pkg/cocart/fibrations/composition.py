"""Composition of correspondences and flatness over [2]."""

from __future__ import annotations

from collections import Counter
from collections.abc import Callable, Sequence

from cocart.core.category import build_category
from cocart.core.exceptions import BadBase, BoundaryMismatch
from cocart.core.unionfind import UnionFind
from cocart.fibrations.correspondence import Correspondence
from cocart.fibrations.grothendieck import disambiguate_labels
from cocart.utils.logging import get_logger

logger = get_logger(__name__)

Pair = tuple[int, int]


def coend_classes(
    left: Sequence[int],
    right: Sequence[int],
    middle: Sequence[int],
    left_tgt: Callable[[int], int],
    right_src: Callable[[int], int],
    middle_ends: Callable[[int], tuple[int, int]],
    act_left: Callable[[int, int], int],
    act_right: Callable[[int, int], int],
) -> UnionFind[Pair]:
    """Quotient of composable pairs (a, b) by (m∘a, b) ~ (a, b∘m).

    ``left`` holds the morphisms a into the middle category, ``right`` the
    morphisms b out of it and ``middle`` its morphisms m; endpoints in the
    middle category are compared through ``left_tgt``, ``right_src`` and
    ``middle_ends``. Pairs are inserted in (a, b) order, so each class is
    represented by its least pair.
    """
    by_src: dict[int, list[int]] = {}
    for b in right:
        by_src.setdefault(right_src(b), []).append(b)
    by_tgt: dict[int, list[int]] = {}
    for a in left:
        by_tgt.setdefault(left_tgt(a), []).append(a)
    classes: UnionFind[Pair] = UnionFind(
        (a, b) for a in sorted(left) for b in sorted(by_src.get(left_tgt(a), []))
    )
    for m in middle:
        d, d2 = middle_ends(m)
        for a in by_tgt.get(d, []):
            for b in by_src.get(d2, []):
                classes.union((act_left(m, a), b), (a, act_right(b, m)))
    return classes


def compose_correspondences(X: Correspondence, Y: Correspondence) -> Correspondence:
    """The composite Y∘X of correspondences C → D → E over [1].

    Cross homs are the coend ⊔_d Hom_X(x, d) × Hom_Y(d, z) modulo
    (m∘a, b) ~ (a, b∘m); a class is named ``b.a`` after its least pair.

    Raises:
        BadBase: If either correspondence is not over [1]
        BoundaryMismatch: If fiber 1 of X differs from fiber 0 of Y
    """
    if X.base_length != 1 or Y.base_length != 1:
        raise BadBase("only correspondences over [1] compose")
    if X.fiber(1) != Y.fiber(0):
        raise BoundaryMismatch(
            f"{X.total.name} ends in {X.fiber(1).name} but {Y.total.name} starts in {Y.fiber(0).name}"
        )
    TX, TY = X.total, Y.total
    x_objs, x_mors = X.fiber_embedding(0)
    xd_objs, xd_mors = X.fiber_embedding(1)
    yd_objs, yd_mors = Y.fiber_embedding(0)
    z_objs, z_mors = Y.fiber_embedding(1)
    xd_pos = {d: k for k, d in enumerate(xd_objs)}
    yd_pos = {d: k for k, d in enumerate(yd_objs)}
    x_pos = {x: k for k, x in enumerate(x_objs)}
    z_pos = {z: k for k, z in enumerate(z_objs)}

    classes = coend_classes(
        left=X.cross_morphisms(0, 1),
        right=Y.cross_morphisms(0, 1),
        middle=range(len(xd_mors)),
        left_tgt=lambda a: xd_pos[TX.tgt[a]],
        right_src=lambda b: yd_pos[TY.src[b]],
        middle_ends=lambda k: (xd_pos[TX.src[xd_mors[k]]], xd_pos[TX.tgt[xd_mors[k]]]),
        act_left=lambda k, a: TX.comp[(xd_mors[k], a)],
        act_right=lambda b, k: TY.comp[(b, yd_mors[k])],
    )
    groups = sorted(
        classes.classes(),
        key=lambda members: (x_pos[TX.src[members[0][0]]], z_pos[TY.tgt[members[0][1]]], members[0]),
    )
    class_of = {pair: k for k, members in enumerate(groups) for pair in members}

    left_labels, right_labels = disambiguate_labels(
        [[TX.objects[x] for x in x_objs], [TY.objects[z] for z in z_objs]]
    )
    left_names, right_names = disambiguate_labels(
        [[TX.names[m] for m in x_mors], [TY.names[m] for m in z_mors]]
    )
    n_left, n_right = len(x_mors), len(z_mors)
    x_mor_pos = {m: k for k, m in enumerate(x_mors)}
    z_mor_pos = {m: k for k, m in enumerate(z_mors)}
    offset = len(x_objs)

    morphisms: list[tuple[str, int, int]] = []
    for m in x_mors:
        morphisms.append((left_names[x_mor_pos[m]], x_pos[TX.src[m]], x_pos[TX.tgt[m]]))
    for m in z_mors:
        morphisms.append((right_names[z_mor_pos[m]], offset + z_pos[TY.src[m]], offset + z_pos[TY.tgt[m]]))
    for members in groups:
        a, b = members[0]
        morphisms.append((f"{TY.names[b]}.{TX.names[a]}", x_pos[TX.src[a]], offset + z_pos[TY.tgt[b]]))

    def compose(g: int, f: int) -> int:
        if f < n_left and g < n_left:
            return x_mor_pos[TX.comp[(x_mors[g], x_mors[f])]]
        if n_left <= f < n_left + n_right:
            return n_left + z_mor_pos[TY.comp[(z_mors[g - n_left], z_mors[f - n_left])]]
        if f < n_left:
            a, b = groups[g - n_left - n_right][0]
            return n_left + n_right + class_of[(TX.comp[(a, x_mors[f])], b)]
        a, b = groups[f - n_left - n_right][0]
        return n_left + n_right + class_of[(a, TY.comp[(z_mors[g - n_left], b)])]

    identity = [x_mor_pos[TX.identity[x]] for x in x_objs] + [
        n_left + z_mor_pos[TY.identity[z]] for z in z_objs
    ]
    total = build_category(
        left_labels + right_labels,
        morphisms,
        identity,
        compose,
        name=f"{TY.name}.{TX.name}",
    )
    logger.debug("correspondences_composed", correspondence=total.name, cross=len(groups))
    return Correspondence(
        total,
        1,
        (0,) * len(x_objs) + (1,) * len(z_objs),
        fibers=(X.fiber(0), Y.fiber(1)),
    )


def flatness_defects(X: Correspondence) -> list[tuple[int, int]]:
    """Pairs (x, z) of levels 0 and 2 where the coend map to Hom(x, z) is not bijective.

    Raises:
        BadBase: If X is not over [2]
    """
    if X.base_length != 2:
        raise BadBase("flatness is defined over [2]")
    T = X.total
    _, middle = X.fiber_embedding(1)
    classes = coend_classes(
        left=X.cross_morphisms(0, 1),
        right=X.cross_morphisms(1, 2),
        middle=middle,
        left_tgt=lambda a: T.tgt[a],
        right_src=lambda b: T.src[b],
        middle_ends=lambda m: (T.src[m], T.tgt[m]),
        act_left=lambda m, a: T.comp[(m, a)],
        act_right=lambda b, m: T.comp[(b, m)],
    )
    per_pair: dict[tuple[int, int], set[int]] = {}
    counts: Counter[tuple[int, int]] = Counter()
    for members in classes.classes():
        a, b = members[0]
        key = (T.src[a], T.tgt[b])
        counts[key] += 1
        per_pair.setdefault(key, set()).add(T.comp[(b, a)])
    defects: list[tuple[int, int]] = []
    for x in X.objects_of_degree(0):
        for z in X.objects_of_degree(2):
            hom = len(T.hom(x, z))
            image = per_pair.get((x, z), set())
            if counts[(x, z)] != hom or len(image) != hom:
                defects.append((x, z))
    return defects


def check_flat_over_triangle(X: Correspondence) -> bool:
    """True iff X → [2] is flat: E_{01} ⊔^{E_1} E_{12} → E is bijective on homs.

    Raises:
        BadBase: If X is not over [2]
    """
    defects = flatness_defects(X)
    if defects:
        T = X.total
        logger.debug(
            "not_flat",
            correspondence=T.name,
            pairs=[f"{T.objects[x]}->{T.objects[z]}" for x, z in defects],
        )
    return not defects
