"""Grothendieck constructions of functors and chains of functors."""

from __future__ import annotations

from collections import Counter
from collections.abc import Sequence

from cocart.core.category import FinCat, build_category
from cocart.core.exceptions import IllFormed, NotComposable, UnknownMorphism
from cocart.core.functor import FunctorData, dual_functor
from cocart.fibrations.correspondence import Correspondence, CrossKey
from cocart.utils.logging import get_logger

logger = get_logger(__name__)


def _transition_maps(
    functors: Sequence[FunctorData],
) -> dict[tuple[int, int], tuple[tuple[int, ...], tuple[int, ...]]]:
    """Object and morphism maps of f_{i→j} for all i ≤ j."""
    fibers = [functors[0].source] + [f.target for f in functors]
    maps: dict[tuple[int, int], tuple[tuple[int, ...], tuple[int, ...]]] = {}
    for i, C in enumerate(fibers):
        obj = tuple(range(C.n_objects))
        mor = tuple(range(C.n_morphisms))
        maps[(i, i)] = (obj, mor)
        for j in range(i + 1, len(fibers)):
            f = functors[j - 1]
            obj = tuple(f.obj_map[y] for y in obj)
            mor = tuple(f.mor_map[m] for m in mor)
            maps[(i, j)] = (obj, mor)
    return maps


def disambiguate_labels(per_level: list[Sequence[str]]) -> list[list[str]]:
    """Prefix labels occurring on several levels with their level."""
    counts = Counter(label for labels in per_level for label in set(labels))
    return [
        [f"{i}:{label}" if counts[label] > 1 else label for label in labels]
        for i, labels in enumerate(per_level)
    ]


def grothendieck_chain(functors: Sequence[FunctorData], name: str = "") -> Correspondence:
    """Correspondence over [n] of a chain C_0 → C_1 → ... → C_n.

    Hom(x_i, z_j) is Hom_{C_j}(f_{i→j}(x_i), z_j) for i < j and empty for
    i > j. Morphisms are ordered fiber by fiber, then cross morphisms
    (i, x, j, β) by (i, j, x, β).

    Raises:
        IllFormed: If the chain is empty
        NotComposable: If consecutive functors do not compose
    """
    if not functors:
        raise IllFormed("a chain needs at least one functor")
    for f, g in zip(functors, functors[1:], strict=False):
        if f.target != g.source:
            raise NotComposable(f"{g.name or 'functor'} does not start where {f.name or 'functor'} ends")
    fibers: list[FinCat] = [functors[0].source] + [f.target for f in functors]
    n = len(functors)
    maps = _transition_maps(functors)

    labels = disambiguate_labels([F.objects for F in fibers])
    fiber_names = disambiguate_labels([F.names for F in fibers])

    object_labels: list[str] = []
    object_base: list[int] = []
    degree: list[int] = []
    for i, F in enumerate(fibers):
        object_base.append(len(object_labels))
        object_labels.extend(labels[i])
        degree.extend([i] * F.n_objects)

    morphisms: list[tuple[str, int, int]] = []
    # (i, a) for fiber morphisms, (i, x, j, beta) for cross morphisms
    decode: list[tuple[int, ...]] = []
    fiber_base: list[int] = []
    for i, F in enumerate(fibers):
        fiber_base.append(len(morphisms))
        for a in range(F.n_morphisms):
            morphisms.append((fiber_names[i][a], object_base[i] + F.src[a], object_base[i] + F.tgt[a]))
            decode.append((i, a))
    cross_index: dict[CrossKey, int] = {}
    for i in range(n + 1):
        for j in range(i + 1, n + 1):
            obj_ij, _ = maps[(i, j)]
            Fj = fibers[j]
            for x in range(fibers[i].n_objects):
                for beta in Fj.out_of(obj_ij[x]):
                    cross_index[(i, x, j, beta)] = len(morphisms)
                    morphisms.append(
                        (
                            f"<{labels[i][x]},{fiber_names[j][beta]}>",
                            object_base[i] + x,
                            object_base[j] + Fj.tgt[beta],
                        )
                    )
                    decode.append((i, x, j, beta))

    def compose(g: int, f: int) -> int:
        df, dg = decode[f], decode[g]
        if len(df) == 2 and len(dg) == 2:
            i, a = df
            return fiber_base[i] + fibers[i].comp[(dg[1], a)]
        if len(df) == 2:
            i, a = df
            _, _, j, beta = dg
            _, mor_ij = maps[(i, j)]
            x = fibers[i].src[a]
            return cross_index[(i, x, j, fibers[j].comp[(beta, mor_ij[a])])]
        i, x, j, beta = df
        if len(dg) == 2:
            return cross_index[(i, x, j, fibers[j].comp[(dg[1], beta)])]
        _, _, k, b = dg
        _, mor_jk = maps[(j, k)]
        return cross_index[(i, x, k, fibers[k].comp[(b, mor_jk[beta])])]

    identity = [fiber_base[i] + F.identity[x] for i, F in enumerate(fibers) for x in range(F.n_objects)]
    if not name:
        joined = ",".join(f.name or "f" for f in functors)
        name = f"E_{joined}" if n == 1 else f"E[{joined}]"
    total = build_category(object_labels, morphisms, identity, compose, name=name)
    logger.debug("grothendieck_built", correspondence=name, levels=n, morphisms=total.n_morphisms)
    return Correspondence(total, n, tuple(degree), fibers=tuple(fibers), cross_index=cross_index)


def grothendieck_cocart(f: FunctorData) -> Correspondence:
    """The cocartesian fibration E_f → [1] classified by f: C → D."""
    return grothendieck_chain([f])


def grothendieck_cart(f: FunctorData) -> Correspondence:
    """The cartesian fibration F_f → [1] with fibers D over 0 and C over 1.

    Built as the opposite of E_{f^op}, so Hom(y, x) = Hom_D(y, f(x)).
    """
    X = grothendieck_cocart(dual_functor(f)).opposite()
    return Correspondence(
        X.total.renamed(f"F_{f.name or 'f'}"),
        1,
        X.degree,
        fibers=X.fibers,
        cross_index=X.cross_index,
    )


def grothendieck_cross(X: Correspondence, i: int, x: int, j: int, beta: int) -> int:
    """Total morphism of a Grothendieck construction for the cross datum (i, x, j, β).

    Raises:
        UnknownMorphism: If X carries no such cross morphism
    """
    try:
        return X.cross_index[(i, x, j, beta)]
    except KeyError:
        raise UnknownMorphism(f"no cross morphism {(i, x, j, beta)} in {X.total.name}") from None
