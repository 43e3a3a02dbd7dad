"""Deligne's colimit correspondence and its comparison with E_f."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from cocart.core.category import build_category, inverse
from cocart.core.equivalence import is_fully_faithful
from cocart.core.exceptions import IllFormed, InternalContradiction, NoFractions
from cocart.core.functor import FunctorData, check_functor
from cocart.core.marking import Marking
from cocart.core.unionfind import UnionFind
from cocart.fibrations.correspondence import Correspondence, CrossKey
from cocart.fibrations.grothendieck import disambiguate_labels, grothendieck_cocart
from cocart.localization.engine import induced_functor, localize
from cocart.localization.fractions import check_right_fractions, ore_squares, resolution_category
from cocart.utils.logging import get_logger

logger = get_logger(__name__)

Element = tuple[int, int]


@dataclass(frozen=True)
class _Deligne:
    correspondence: Correspondence
    # (s, α) representative of each cross morphism, keyed by total index
    representatives: dict[int, Element]


def _build(f: FunctorData, W: Marking) -> _Deligne:
    C, D = f.source, f.target
    if W.host != C:
        raise IllFormed(f"marking is not on {C.name}")
    report = check_right_fractions(C, W)
    if not report.ok:
        raise NoFractions(f"{C.name}: {report.describe()}")

    classes: UnionFind[Element] = UnionFind(
        (s, alpha)
        for x in range(C.n_objects)
        for s in C.into(x)
        if s in W
        for alpha in D.out_of(f.obj_map[C.src[s]])
    )
    for x in range(C.n_objects):
        L = resolution_category(C, W, x)
        for m, u in enumerate(L.triangles):
            s1 = L.arrows[L.category.src[m]]
            s2 = L.arrows[L.category.tgt[m]]
            for alpha in D.out_of(f.obj_map[C.src[s2]]):
                classes.union((s2, alpha), (s1, D.comp[(alpha, f.mor_map[u])]))

    labels = disambiguate_labels([C.objects, D.objects])
    fiber_names = disambiguate_labels([C.names, D.names])
    n0, n1 = C.n_morphisms, D.n_morphisms
    offset = C.n_objects
    morphisms: list[tuple[str, int, int]] = [
        (fiber_names[0][a], C.src[a], C.tgt[a]) for a in range(n0)
    ] + [(fiber_names[1][b], offset + D.src[b], offset + D.tgt[b]) for b in range(n1)]

    # classes meeting (id_x, β) first, in (x, β) order, named like E_f
    class_index: dict[Element, int] = {}
    representatives: dict[int, Element] = {}
    cross_index: dict[CrossKey, int] = {}
    for x in range(C.n_objects):
        for beta in D.out_of(f.obj_map[x]):
            root = classes.find((C.identity[x], beta))
            k = class_index.get(root)
            if k is None:
                k = len(morphisms)
                class_index[root] = k
                representatives[k] = (C.identity[x], beta)
                label = f"<{labels[0][x]},{fiber_names[1][beta]}>"
                morphisms.append((label, x, offset + D.tgt[beta]))
            cross_index[(0, x, 1, beta)] = k
    remaining = [members[0] for members in classes.classes() if members[0] not in class_index]
    for s, alpha in sorted(remaining, key=lambda e: (C.tgt[e[0]], e)):
        k = len(morphisms)
        class_index[(s, alpha)] = k
        representatives[k] = (s, alpha)
        x = C.tgt[s]
        morphisms.append(
            (f"<{labels[0][x]},{fiber_names[1][alpha]}.{C.names[s]}^-1>", x, offset + D.tgt[alpha])
        )

    def cross(element: Element) -> int:
        return class_index[classes.find(element)]

    def compose(g: int, h: int) -> int:
        if g < n0 and h < n0:
            return C.comp[(g, h)]
        if n0 <= h < n0 + n1:
            return n0 + D.comp[(g - n0, h - n0)]
        if h >= n0 + n1:
            s, alpha = representatives[h]
            return cross((s, D.comp[(g - n0, alpha)]))
        s, alpha = representatives[g]
        s2, c2 = next(ore_squares(C, W, s, h))
        return cross((s2, D.comp[(alpha, f.mor_map[c2])]))

    identity = list(C.identity) + [n0 + b for b in D.identity]
    total = build_category(
        labels[0] + labels[1], morphisms, identity, compose, name=f"Del_{f.name or 'f'}"
    )
    logger.debug("deligne_built", correspondence=total.name, cross=len(representatives))
    X = Correspondence(
        total,
        1,
        (0,) * C.n_objects + (1,) * D.n_objects,
        fibers=(C, D),
        cross_index=cross_index,
    )
    return _Deligne(X, representatives)


def deligne_correspondence(f: FunctorData, W: Marking) -> Correspondence:
    """The correspondence E^Del from C to D.

    Hom(x, y) is the colimit over L_x^op of Hom_D(f(x'), y); composition
    with C goes through Ore squares. ``cross_index`` records the class of
    (id_x, β) under the key (0, x, 1, β) used by E_f.

    Raises:
        IllFormed: If W is not a marking of f's source
        NoFractions: If W does not admit right fractions
    """
    return _build(f, W).correspondence


def deligne_canonical_map(
    f: FunctorData, W: Marking, E_del: Correspondence | None = None
) -> FunctorData:
    """The obvious map E_f → E^Del, identity on both fibers.

    Raises:
        NoFractions: If W does not admit right fractions
    """
    if E_del is None:
        E_del = deligne_correspondence(f, W)
    E_f = grothendieck_cocart(f)
    T = E_f.total
    n_fibers = f.source.n_morphisms + f.target.n_morphisms
    mor_map = list(range(n_fibers))
    for key, m in sorted(E_f.cross_index.items(), key=lambda item: item[1]):
        if m != len(mor_map):
            raise InternalContradiction("cross morphisms of E_f are not contiguous")
        mor_map.append(E_del.cross_index[key])
    return FunctorData(T, E_del.total, tuple(range(T.n_objects)), tuple(mor_map), name="can")


@dataclass(frozen=True)
class DeligneComparison:
    """The comparison δ′ between the localizations of E^Del and E_f."""

    deligne: Correspondence
    canonical: FunctorData
    delta: FunctorData
    delta_prime: FunctorData
    fully_faithful: bool

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary."""
        return {
            "deligne": self.deligne.to_dict(),
            "canonical": self.canonical.to_dict()["morphisms"],
            "delta_prime": self.delta_prime.to_dict(),
            "fully_faithful": self.fully_faithful,
        }


def _fiber_marking(X: Correspondence, W: Marking) -> Marking:
    """W carried to fiber 0 of a correspondence whose fiber 0 comes first."""
    return Marking(X.total, W.members)


def deligne_comparison(f: FunctorData, W: Marking) -> DeligneComparison:
    """Build δ: E^Del → E'_f and its factorization δ′ through (E^Del)'.

    A cross class (s: x' → x, α) goes to α∘s⁻¹ in E'_f.

    Raises:
        NoFractions: If W does not admit right fractions
        InternalContradiction: If δ is not a functor
    """
    built = _build(f, W)
    E_del = built.correspondence
    E_f = grothendieck_cocart(f)
    localized_f = localize(E_f.total, _fiber_marking(E_f, W))
    localized_del = localize(E_del.total, _fiber_marking(E_del, W))
    assert localized_f.localized is not None and localized_f.q is not None
    target, q = localized_f.localized, localized_f.q
    n_fibers = f.source.n_morphisms + f.target.n_morphisms

    mor_map = list(q.mor_map[:n_fibers])
    for k in range(n_fibers, E_del.total.n_morphisms):
        s, alpha = built.representatives[k]
        lifted = q.mor_map[E_f.cross_index[(0, f.source.src[s], 1, alpha)]]
        s_inv = inverse(target, q.mor_map[s])
        if s_inv is None:
            raise InternalContradiction(f"{f.source.names[s]} is not inverted in E'_f")
        mor_map.append(target.comp[(lifted, s_inv)])
    delta = FunctorData(
        E_del.total, target, tuple(range(E_del.total.n_objects)), tuple(mor_map), name="delta"
    )
    issues = check_functor(delta)
    if issues:
        raise InternalContradiction(f"delta is not a functor: {issues[0]}")
    delta_prime = induced_functor(localized_del, delta).renamed("delta'")
    fully_faithful = is_fully_faithful(delta_prime)
    logger.info("deligne_compared", functor=f.name, fully_faithful=fully_faithful)
    return DeligneComparison(E_del, deligne_canonical_map(f, W, E_del), delta, delta_prime, fully_faithful)
