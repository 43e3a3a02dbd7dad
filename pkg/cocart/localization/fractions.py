"""Gabriel–Zisman right calculus of fractions."""

from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass, field
from typing import Any

from cocart.core.category import FinCat, build_category
from cocart.core.exceptions import NoFractions
from cocart.core.functor import FunctorData
from cocart.core.marking import Marking
from cocart.core.unionfind import UnionFind
from cocart.localization.models import Fraction, LocalizationResult, Method, ResolutionCategory
from cocart.utils.logging import get_logger

logger = get_logger(__name__)

Element = tuple[int, int]


@dataclass
class FractionsReport:
    """Failures of the Ore and cancellation conditions.

    ``ore_failures`` holds pairs (s, a) with s in W and tgt(a) = tgt(s) for
    which no square exists; ``cancellation_failures`` holds triples
    (s, f, g) with s∘f = s∘g but f and g not equalized by any t in W.
    """

    category: FinCat
    ore_failures: list[tuple[int, int]] = field(default_factory=list)
    cancellation_failures: list[tuple[int, int, int]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        """True iff the right calculus of fractions holds."""
        return not self.ore_failures and not self.cancellation_failures

    def describe(self) -> str:
        """First failure, for error messages."""
        C = self.category
        if self.ore_failures:
            s, a = self.ore_failures[0]
            return f"no Ore square for ({C.names[s]}, {C.names[a]})"
        if self.cancellation_failures:
            s, f, g = self.cancellation_failures[0]
            return f"{C.names[s]} does not cancel on ({C.names[f]}, {C.names[g]})"
        return "right fractions hold"

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary."""
        names = self.category.names
        return {
            "ok": self.ok,
            "ore_failures": [[names[s], names[a]] for s, a in self.ore_failures],
            "cancellation_failures": [[names[s], names[f], names[g]] for s, f, g in self.cancellation_failures],
        }


def ore_squares(C: FinCat, W: Marking, s: int, a: int) -> Iterator[tuple[int, int]]:
    """All (s', a') with s' in W and s∘a' = a∘s', least first.

    Here s: x' → x is in W and a: y → x; s': y' → y and a': y' → x'.
    """
    for apex in range(C.n_objects):
        for s2 in C.hom(apex, C.src[a]):
            if s2 not in W:
                continue
            target = C.comp[(a, s2)]
            for a2 in C.hom(apex, C.src[s]):
                if C.comp[(s, a2)] == target:
                    yield s2, a2


def _equalized(C: FinCat, W: Marking, f: int, g: int) -> bool:
    return any(
        t in W and C.comp[(f, t)] == C.comp[(g, t)]
        for apex in range(C.n_objects)
        for t in C.hom(apex, C.src[f])
    )


def check_right_fractions(C: FinCat, W: Marking) -> FractionsReport:
    """Check the Ore and cancellation conditions for W.

    Returns:
        Report listing every failing instance; empty iff right fractions hold
    """
    report = FractionsReport(C)
    for s in W:
        if C.is_identity(s):
            continue
        x2, x = C.src[s], C.tgt[s]
        for a in C.into(x):
            if next(ore_squares(C, W, s, a), None) is None:
                report.ore_failures.append((s, a))
        for w in range(C.n_objects):
            parallel = C.hom(w, x2)
            for i, f in enumerate(parallel):
                for g in parallel[i + 1 :]:
                    if C.comp[(s, f)] == C.comp[(s, g)] and not _equalized(C, W, f, g):
                        report.cancellation_failures.append((s, f, g))
    logger.debug(
        "fractions_checked",
        category=C.name,
        ore_failures=len(report.ore_failures),
        cancellation_failures=len(report.cancellation_failures),
    )
    return report


def check_left_fractions(C: FinCat, W: Marking) -> FractionsReport:
    """Left calculus of fractions, i.e. right fractions in the opposite category."""
    op = W.opposite()
    return check_right_fractions(op.host, op)


def resolution_category(C: FinCat, W: Marking, x: int) -> ResolutionCategory:
    """The category L_x of W-arrows into x and commuting triangles.

    A morphism from s₁ to s₂ is a u with s₂∘u = s₁; it is named after u and
    the arrow it starts from.
    """
    arrows = [s for s in C.into(x) if s in W]
    position = {s: k for k, s in enumerate(arrows)}
    triangles: list[tuple[int, int, int]] = []
    for s1 in arrows:
        for s2 in arrows:
            for u in C.hom(C.src[s1], C.src[s2]):
                if C.comp[(s2, u)] == s1:
                    triangles.append((s1, s2, u))
    index = {t: k for k, t in enumerate(triangles)}
    morphisms = [(f"{C.names[u]}@{C.names[s1]}", position[s1], position[s2]) for s1, s2, u in triangles]
    identity = [index[(s, s, C.identity[C.src[s]])] for s in arrows]

    def compose(g: int, f: int) -> int:
        s1, _, u1 = triangles[f]
        _, s3, u2 = triangles[g]
        return index[(s1, s3, C.comp[(u2, u1)])]

    category = build_category(
        [C.names[s] for s in arrows], morphisms, identity, compose, name=f"L_{C.objects[x]}"
    )
    return ResolutionCategory(x, category, tuple(arrows), tuple(u for _, _, u in triangles))


def fraction_classes(C: FinCat, W: Marking) -> UnionFind[Element]:
    """Spans (s, a) modulo the transition maps of the resolution categories.

    (s₂, a) ~ (s₁, a∘u) for every triangle u: s₁ → s₂. Spans are inserted
    by (apex, s, a), so each class is represented by its least span.
    """
    elements = [
        (s, a)
        for apex in range(C.n_objects)
        for s in C.out_of(apex)
        if s in W
        for a in C.out_of(apex)
    ]
    classes: UnionFind[Element] = UnionFind(elements)
    for x in range(C.n_objects):
        L = resolution_category(C, W, x)
        for m, u in enumerate(L.triangles):
            s1 = L.arrows[L.category.src[m]]
            s2 = L.arrows[L.category.tgt[m]]
            for a in C.out_of(C.src[s2]):
                classes.union((s2, a), (s1, C.comp[(a, u)]))
    return classes


def localize_fractions(C: FinCat, W: Marking) -> LocalizationResult:
    """Localize C at W through right fractions.

    Hom(x, y) in C[W⁻¹] is the colimit over L_x^op of Hom(x', y). The images
    of C come first, ordered by least preimage and named after it (or after
    the identity they contain); the remaining classes follow by least
    representative span and are named ``a.s^-1``.

    Raises:
        NoFractions: If W does not admit a right calculus of fractions
    """
    report = check_right_fractions(C, W)
    if not report.ok:
        raise NoFractions(f"{C.name}: {report.describe()}")
    classes = fraction_classes(C, W)
    groups: list[list[Element]] = []
    group_of: dict[Element, int] = {}
    q_map: list[int] = []

    def register(element: Element) -> int:
        root = classes.find(element)
        k = group_of.get(root)
        if k is None:
            k = len(groups)
            group_of[root] = k
            groups.append([])
        return k

    for m in range(C.n_morphisms):
        q_map.append(register((C.identity[C.src[m]], m)))
    n_images = len(groups)
    extra = sorted(
        (members[0] for members in classes.classes() if members[0] not in group_of),
        key=lambda e: (C.src[e[0]], e[0], e[1]),
    )
    for element in extra:
        register(element)
    for members in classes.classes():
        groups[group_of[members[0]]] = members

    certificates: list[Fraction] = []
    morphisms: list[tuple[str, int, int]] = []
    for k, members in enumerate(groups):
        if k < n_images:
            m = q_map.index(k)
            ids = [n for n in range(C.n_morphisms) if q_map[n] == k and C.is_identity(n)]
            label = C.names[ids[0]] if ids else C.names[m]
            cert = Fraction(C.src[m], C.identity[C.src[m]], m)
        else:
            s, a = members[0]
            cert = Fraction(C.src[s], s, a)
            label = cert.render(C)
        certificates.append(cert)
        morphisms.append((label, C.tgt[cert.backward], C.tgt[cert.forward]))

    def compose(g: int, f: int) -> int:
        first, second = certificates[f], certificates[g]
        s2, a2 = next(ore_squares(C, W, second.backward, first.forward))
        s = C.comp[(first.backward, s2)]
        return group_of[classes.find((s, C.comp[(second.forward, a2)]))]

    identity = [q_map[C.identity[x]] for x in range(C.n_objects)]
    localized = build_category(C.objects, morphisms, identity, compose, name=f"{C.name}[W^-1]")
    q = FunctorData(C, localized, tuple(range(C.n_objects)), tuple(q_map), name="q")
    logger.info(
        "localization_computed",
        category=C.name,
        method=Method.FRACTIONS.value,
        morphisms=localized.n_morphisms,
    )
    return LocalizationResult(
        source=C,
        marking=W,
        localized=localized,
        q=q,
        method=Method.FRACTIONS,
        certificates=tuple(certificates),
    )
