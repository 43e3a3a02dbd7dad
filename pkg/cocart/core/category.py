"""Finite categories stored as explicit composition tables."""

from __future__ import annotations

import itertools
from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, field
from enum import Enum
from functools import cached_property
from typing import Any

from cocart.core.exceptions import IllFormed, NotComposable, UnknownMorphism
from cocart.utils.logging import get_logger

logger = get_logger(__name__)

OP_SUFFIX = "^op"


@dataclass(frozen=True)
class FinCat:
    """A finite category.

    Objects and morphisms are addressed by index; labels and names are only
    used for display, parsing and reports. ``comp[(g, f)]`` is ``g∘f`` and is
    defined exactly when ``tgt[f] == src[g]``.

    The constructor does not check the category axioms, so planted defects can
    be represented; use :func:`validate_category` for that.
    """

    objects: tuple[str, ...]
    names: tuple[str, ...]
    src: tuple[int, ...]
    tgt: tuple[int, ...]
    identity: tuple[int, ...]
    comp: dict[tuple[int, int], int]
    name: str = field(default="", compare=False)

    def __hash__(self) -> int:
        return hash((self.objects, self.names, self.src, self.tgt, self.identity))

    def __repr__(self) -> str:
        return f"FinCat({self.name or '?'}: {self.n_objects} objects, {self.n_morphisms} morphisms)"

    @property
    def n_objects(self) -> int:
        """Number of objects."""
        return len(self.objects)

    @property
    def n_morphisms(self) -> int:
        """Number of morphisms."""
        return len(self.names)

    @cached_property
    def _homs(self) -> dict[tuple[int, int], tuple[int, ...]]:
        table: dict[tuple[int, int], list[int]] = {}
        for m in range(self.n_morphisms):
            table.setdefault((self.src[m], self.tgt[m]), []).append(m)
        return {key: tuple(ms) for key, ms in table.items()}

    @cached_property
    def _name_index(self) -> dict[str, int]:
        index: dict[str, int] = {}
        for m, morphism_name in enumerate(self.names):
            index.setdefault(morphism_name, m)
        return index

    @cached_property
    def _object_index(self) -> dict[str, int]:
        index: dict[str, int] = {}
        for x, label in enumerate(self.objects):
            index.setdefault(label, x)
        return index

    @cached_property
    def _identity_set(self) -> frozenset[int]:
        return frozenset(self.identity)

    def hom(self, x: int, y: int) -> tuple[int, ...]:
        """Morphisms x → y in index order."""
        return self._homs.get((x, y), ())

    def out_of(self, x: int) -> tuple[int, ...]:
        """Morphisms with source x in index order."""
        return tuple(m for m in range(self.n_morphisms) if self.src[m] == x)

    def into(self, y: int) -> tuple[int, ...]:
        """Morphisms with target y in index order."""
        return tuple(m for m in range(self.n_morphisms) if self.tgt[m] == y)

    def is_identity(self, m: int) -> bool:
        """Check whether m is the identity of its object."""
        return m in self._identity_set

    def mor(self, name: str) -> int:
        """Look up a morphism by name.

        Raises:
            UnknownMorphism: If no morphism has that name
        """
        try:
            return self._name_index[name]
        except KeyError:
            raise UnknownMorphism(f"no morphism named {name!r} in {self.name or 'category'}") from None

    def obj(self, label: str) -> int:
        """Look up an object by label.

        Raises:
            IllFormed: If no object has that label
        """
        try:
            return self._object_index[label]
        except KeyError:
            raise IllFormed(f"no object named {label!r} in {self.name or 'category'}") from None

    def check_morphism(self, m: int) -> None:
        """Raise UnknownMorphism unless m is a valid morphism index."""
        if not 0 <= m < self.n_morphisms:
            raise UnknownMorphism(f"morphism {m} not in {self.name or 'category'}")

    def compose(self, g: int, f: int) -> int:
        """Return g∘f.

        Raises:
            UnknownMorphism: If either index is out of range
            NotComposable: If tgt(f) != src(g)
        """
        self.check_morphism(g)
        self.check_morphism(f)
        if self.tgt[f] != self.src[g]:
            raise NotComposable(
                f"cannot compose {self.names[g]} after {self.names[f]}: "
                f"{self.objects[self.tgt[f]]} != {self.objects[self.src[g]]}"
            )
        try:
            return self.comp[(g, f)]
        except KeyError:
            raise IllFormed(
                f"composition {self.names[g]}∘{self.names[f]} missing from table"
            ) from None

    def compose_path(self, morphisms: Sequence[int]) -> int:
        """Compose a path given in application order (first applied first)."""
        if not morphisms:
            raise IllFormed("empty path has no object")
        result = morphisms[0]
        for m in morphisms[1:]:
            result = self.compose(m, result)
        return result

    def composable_pairs(self) -> Iterable[tuple[int, int]]:
        """All (g, f) with tgt(f) == src(g), f-major in index order."""
        for f in range(self.n_morphisms):
            for g in self.out_of(self.tgt[f]):
                yield g, f

    def renamed(self, name: str) -> FinCat:
        """Same table under another display name."""
        return FinCat(self.objects, self.names, self.src, self.tgt, self.identity, self.comp, name)

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary."""
        return {
            "name": self.name,
            "objects": list(self.objects),
            "morphisms": [
                {
                    "name": self.names[m],
                    "src": self.objects[self.src[m]],
                    "tgt": self.objects[self.tgt[m]],
                }
                for m in range(self.n_morphisms)
            ],
            "composition": [
                [self.names[g], self.names[f], self.names[h]]
                for (g, f), h in sorted(self.comp.items(), key=lambda item: (item[0][1], item[0][0]))
                if not self.is_identity(g) and not self.is_identity(f)
            ],
        }


class ViolationKind(Enum):
    """Kinds of category axiom violations."""

    TYPING = "typing"
    TOTALITY = "totality"
    UNIT = "unit"
    ASSOCIATIVITY = "associativity"


@dataclass(frozen=True)
class Violation:
    """One violated axiom instance."""

    kind: ViolationKind
    morphisms: tuple[str, ...]
    detail: str

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary."""
        return {"kind": self.kind.value, "morphisms": list(self.morphisms), "detail": self.detail}


@dataclass
class ValidationReport:
    """Result of checking the category axioms."""

    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        """True iff no axiom is violated."""
        return not self.violations

    def of_kind(self, kind: ViolationKind) -> list[Violation]:
        """Violations of one kind."""
        return [v for v in self.violations if v.kind is kind]

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary."""
        return {"ok": self.ok, "violations": [v.to_dict() for v in self.violations]}


def validate_category(C: FinCat) -> ValidationReport:
    """Check typing, totality, unit and associativity laws.

    Args:
        C: Category table to check

    Returns:
        Report listing every violated instance; empty iff C is a category
    """
    report = ValidationReport()
    n_obj, n_mor = C.n_objects, C.n_morphisms

    def add(kind: ViolationKind, ms: Sequence[int], detail: str) -> None:
        report.violations.append(Violation(kind, tuple(C.names[m] for m in ms), detail))

    if not (len(C.src) == len(C.tgt) == n_mor) or len(C.identity) != n_obj:
        report.violations.append(
            Violation(ViolationKind.TYPING, (), "table lengths disagree")
        )
        return report
    for m in range(n_mor):
        if not (0 <= C.src[m] < n_obj and 0 <= C.tgt[m] < n_obj):
            add(ViolationKind.TYPING, [m], "endpoint out of range")
    if not report.ok:
        return report
    for x, i in enumerate(C.identity):
        if not 0 <= i < n_mor or C.src[i] != x or C.tgt[i] != x:
            report.violations.append(
                Violation(ViolationKind.TYPING, (C.objects[x],), "identity is not an endomorphism of its object")
            )
    if not report.ok:
        return report

    for (g, f), h in C.comp.items():
        if not (0 <= g < n_mor and 0 <= f < n_mor and 0 <= h < n_mor):
            report.violations.append(Violation(ViolationKind.TYPING, (), f"entry {(g, f)} out of range"))
            continue
        if C.tgt[f] != C.src[g]:
            add(ViolationKind.TYPING, [g, f], "entry for a non-composable pair")
        elif C.src[h] != C.src[f] or C.tgt[h] != C.tgt[g]:
            add(ViolationKind.TYPING, [g, f], f"composite {C.names[h]} has wrong endpoints")

    for g, f in C.composable_pairs():
        if (g, f) not in C.comp:
            add(ViolationKind.TOTALITY, [g, f], "composable pair has no composite")

    for f in range(n_mor):
        left = C.comp.get((C.identity[C.tgt[f]], f))
        if left is not None and left != f:
            add(ViolationKind.UNIT, [C.identity[C.tgt[f]], f], "id∘f != f")
        right = C.comp.get((f, C.identity[C.src[f]]))
        if right is not None and right != f:
            add(ViolationKind.UNIT, [f, C.identity[C.src[f]]], "f∘id != f")

    for g, f in C.composable_pairs():
        gf = C.comp.get((g, f))
        if gf is None:
            continue
        for h in C.out_of(C.tgt[g]):
            hg = C.comp.get((h, g))
            if hg is None:
                continue
            lhs = C.comp.get((hg, f))
            rhs = C.comp.get((h, gf))
            if lhs is not None and rhs is not None and lhs != rhs:
                add(ViolationKind.ASSOCIATIVITY, [h, g, f], "(h∘g)∘f != h∘(g∘f)")

    if not report.ok:
        logger.debug("category_invalid", category=C.name, violations=len(report.violations))
    return report


def inverse(C: FinCat, m: int) -> int | None:
    """Return the inverse of m, or None if m is not an isomorphism.

    Raises:
        UnknownMorphism: If m is not in C
    """
    C.check_morphism(m)
    x, y = C.src[m], C.tgt[m]
    for n in C.hom(y, x):
        if C.comp.get((n, m)) == C.identity[x] and C.comp.get((m, n)) == C.identity[y]:
            return n
    return None


def is_isomorphism(C: FinCat, m: int) -> bool:
    """Check whether m has a two-sided inverse.

    Raises:
        UnknownMorphism: If m is not in C
    """
    return inverse(C, m) is not None


def isomorphisms(C: FinCat) -> frozenset[int]:
    """All isomorphisms of C."""
    return frozenset(m for m in range(C.n_morphisms) if is_isomorphism(C, m))


def build_category(
    object_labels: Sequence[str],
    morphisms: Sequence[tuple[str, int, int]],
    identity: Sequence[int],
    compose: Callable[[int, int], int],
    name: str = "",
) -> FinCat:
    """Assemble a FinCat from a composition rule.

    Args:
        object_labels: Object labels in index order
        morphisms: (name, src, tgt) per morphism in index order
        identity: Identity morphism per object
        compose: Returns the index of g∘f for a composable pair (g, f)
        name: Display name

    Returns:
        FinCat with the composition table filled for every composable pair
    """
    src = tuple(s for _, s, _ in morphisms)
    tgt = tuple(t for _, _, t in morphisms)
    by_src: dict[int, list[int]] = {}
    for m, s in enumerate(src):
        by_src.setdefault(s, []).append(m)
    comp: dict[tuple[int, int], int] = {}
    for f in range(len(morphisms)):
        for g in by_src.get(tgt[f], ()):
            comp[(g, f)] = compose(g, f)
    return FinCat(
        objects=tuple(object_labels),
        names=tuple(n for n, _, _ in morphisms),
        src=src,
        tgt=tgt,
        identity=tuple(identity),
        comp=comp,
        name=name,
    )


def opposite(C: FinCat) -> FinCat:
    """Return C^op (same indices, reversed arrows).

    ``opposite(opposite(C)) == C`` holds on the nose, including the name.
    """
    name = C.name[: -len(OP_SUFFIX)] if C.name.endswith(OP_SUFFIX) else C.name + OP_SUFFIX
    return FinCat(
        objects=C.objects,
        names=C.names,
        src=C.tgt,
        tgt=C.src,
        identity=C.identity,
        comp={(f, g): h for (g, f), h in C.comp.items()},
        name=name,
    )


def preorder(
    labels: Sequence[str], relations: Iterable[tuple[str, str]], name: str = ""
) -> FinCat:
    """Thin category generated by a relation (reflexive-transitive closure).

    Identities come first, then one arrow ``a->b`` per related pair in
    (source, target) order.
    """
    n = len(labels)
    index = {label: i for i, label in enumerate(labels)}
    if len(index) != n:
        raise IllFormed("duplicate object labels")
    le = [[i == j for j in range(n)] for i in range(n)]
    for a, b in relations:
        if a not in index or b not in index:
            raise IllFormed(f"relation {a} <= {b} mentions an unknown object")
        le[index[a]][index[b]] = True
    for k, i, j in itertools.product(range(n), repeat=3):
        if le[i][k] and le[k][j]:
            le[i][j] = True
    morphisms: list[tuple[str, int, int]] = [(f"id_{labels[i]}", i, i) for i in range(n)]
    arrow: dict[tuple[int, int], int] = {(i, i): i for i in range(n)}
    for i, j in itertools.product(range(n), repeat=2):
        if i != j and le[i][j]:
            arrow[(i, j)] = len(morphisms)
            morphisms.append((f"{labels[i]}->{labels[j]}", i, j))
    return build_category(
        labels,
        morphisms,
        list(range(n)),
        lambda g, f: arrow[(morphisms[f][1], morphisms[g][2])],
        name=name,
    )


def chain(n: int) -> FinCat:
    """The poset [n] = {0 < 1 < ... < n}."""
    labels = [str(i) for i in range(n + 1)]
    return preorder(labels, [(labels[i], labels[i + 1]) for i in range(n)], name=f"[{n}]")


def terminal() -> FinCat:
    """The terminal category T with one object and its identity."""
    return preorder(["*"], [], name="T")


def discrete(labels: Sequence[str], name: str = "") -> FinCat:
    """Discrete category on the given objects."""
    return preorder(labels, [], name=name or "discrete")


def indiscrete(labels: Sequence[str], name: str = "") -> FinCat:
    """Indiscrete groupoid: exactly one arrow between any two objects."""
    return preorder(labels, itertools.permutations(labels, 2), name=name or "indiscrete")


def full_subcategory(C: FinCat, objects: Sequence[int], name: str = "") -> FinCat:
    """Full subcategory on the given objects.

    Objects keep the given order; morphisms keep their relative order in C.
    """
    position = {x: k for k, x in enumerate(objects)}
    kept = [m for m in range(C.n_morphisms) if C.src[m] in position and C.tgt[m] in position]
    new_index = {m: k for k, m in enumerate(kept)}
    return build_category(
        [C.objects[x] for x in objects],
        [(C.names[m], position[C.src[m]], position[C.tgt[m]]) for m in kept],
        [new_index[C.identity[x]] for x in objects],
        lambda g, f: new_index[C.comp[(kept[g], kept[f])]],
        name=name or C.name,
    )


def product(B: FinCat, C: FinCat, name: str = "") -> FinCat:
    """Product category B×C.

    Object (b, c) has index ``b·|Ob C| + c``; morphism (β, γ) has index
    ``β·|Mor C| + γ``.
    """
    nc, mc = C.n_objects, C.n_morphisms
    labels = [f"({b},{c})" for b in B.objects for c in C.objects]
    morphisms = [
        (f"({B.names[beta]},{C.names[gamma]})", B.src[beta] * nc + C.src[gamma], B.tgt[beta] * nc + C.tgt[gamma])
        for beta in range(B.n_morphisms)
        for gamma in range(mc)
    ]
    identity = [B.identity[b] * mc + C.identity[c] for b in range(B.n_objects) for c in range(nc)]

    def compose(g: int, f: int) -> int:
        return B.comp[(g // mc, f // mc)] * mc + C.comp[(g % mc, f % mc)]

    return build_category(labels, morphisms, identity, compose, name=name or f"{B.name}x{C.name}")


def product_with_chain(C: FinCat, n: int) -> FinCat:
    """C×[n]."""
    return product(C, chain(n))


def commuting_squares(C: FinCat) -> list[tuple[int, int, int, int]]:
    """All (f, f', a, b) with b∘f = f'∘a, in the order used by :func:`arrow_category`."""
    squares: list[tuple[int, int, int, int]] = []
    for f in range(C.n_morphisms):
        for f2 in range(C.n_morphisms):
            for a in C.hom(C.src[f], C.src[f2]):
                for b in C.hom(C.tgt[f], C.tgt[f2]):
                    if C.comp[(b, f)] == C.comp[(f2, a)]:
                        squares.append((f, f2, a, b))
    return squares


def arrow_category(C: FinCat, name: str = "") -> FinCat:
    """The arrow category C^[1]: objects are morphisms, morphisms commuting squares.

    A morphism from f: x→y to f': x'→y' is a pair (a: x→x', b: y→y') with
    b∘f = f'∘a, named ``[a|b]``.
    """
    squares = commuting_squares(C)
    index = {sq: k for k, sq in enumerate(squares)}
    morphisms = [(f"[{C.names[a]}|{C.names[b]}]", f, f2) for f, f2, a, b in squares]
    identity = [
        index[(f, f, C.identity[C.src[f]], C.identity[C.tgt[f]])] for f in range(C.n_morphisms)
    ]

    def compose(g: int, f: int) -> int:
        f_src, _, a1, b1 = squares[f]
        _, g_tgt, a2, b2 = squares[g]
        return index[(f_src, g_tgt, C.comp[(a2, a1)], C.comp[(b2, b1)])]

    return build_category(list(C.names), morphisms, identity, compose, name=name or f"{C.name}^[1]")
