"""Presentations by generators and relations, compiled to explicit tables.

Compilation enumerates the right Cayley graph of the presented category
(one node per morphism, one edge per generator, edges meaning
post-composition) and identifies nodes with a coincidence queue, in the
style of a Todd–Coxeter enumeration. Relations are traced from every node
whose target is the relation's source object.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Any

from cocart.core.category import FinCat, build_category
from cocart.core.exceptions import BudgetExceeded, IllFormed
from cocart.utils.logging import get_logger

logger = get_logger(__name__)

IDENTITY_PREFIX = "id_"

NODES_PER_MORPHISM = 8
NODE_SLACK = 64


@dataclass(frozen=True)
class Generator:
    """A generating arrow."""

    name: str
    src: str
    tgt: str


@dataclass(frozen=True)
class Relation:
    """An equation between two words.

    Words are written as in the DSL: ``("g", "f")`` stands for g∘f, so the
    last token is applied first. ``id_x`` tokens denote identities.
    """

    lhs: tuple[str, ...]
    rhs: tuple[str, ...]


@dataclass(frozen=True)
class Presentation:
    """Objects, generating arrows and relations of a finite category."""

    name: str
    objects: tuple[str, ...]
    generators: tuple[Generator, ...] = ()
    relations: tuple[Relation, ...] = ()

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary."""
        return {
            "name": self.name,
            "objects": list(self.objects),
            "arrows": [[g.name, g.src, g.tgt] for g in self.generators],
            "relations": [[".".join(r.lhs), ".".join(r.rhs)] for r in self.relations],
        }


@dataclass
class _Node:
    src: int
    tgt: int
    edges: dict[int, int] = field(default_factory=dict)


class _Enumeration:
    """Mutable coset-table state for one compilation."""

    def __init__(self, n_objects: int, gen_src: list[int], gen_tgt: list[int], cap: int) -> None:
        self.gen_src = gen_src
        self.gen_tgt = gen_tgt
        self.cap = cap
        self.nodes: list[_Node] = [_Node(x, x) for x in range(n_objects)]
        self.parent: list[int] = list(range(n_objects))
        self.live = n_objects

    def find(self, n: int) -> int:
        root = n
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[n] != root:
            self.parent[n], n = root, self.parent[n]
        return root

    def follow(self, n: int, g: int) -> int:
        """Target of the g-edge out of n, defining a fresh node if needed."""
        n = self.find(n)
        node = self.nodes[n]
        target = node.edges.get(g)
        if target is not None:
            return self.find(target)
        if len(self.nodes) >= self.cap:
            raise BudgetExceeded(f"enumeration exceeded {self.cap} nodes", self.cap)
        new = len(self.nodes)
        self.nodes.append(_Node(node.src, self.gen_tgt[g]))
        self.parent.append(new)
        self.live += 1
        node.edges[g] = new
        return new

    def trace(self, n: int, word: list[int]) -> int:
        for g in word:
            n = self.follow(n, g)
        return self.find(n)

    def coincidence(self, a: int, b: int) -> None:
        queue: deque[tuple[int, int]] = deque([(a, b)])
        while queue:
            x, y = queue.popleft()
            rx, ry = self.find(x), self.find(y)
            if rx == ry:
                continue
            keep, drop = min(rx, ry), max(rx, ry)
            self.parent[drop] = keep
            self.live -= 1
            kept_edges = self.nodes[keep].edges
            for g, target in self.nodes[drop].edges.items():
                existing = kept_edges.get(g)
                if existing is None:
                    kept_edges[g] = target
                else:
                    queue.append((existing, target))
            self.nodes[drop].edges = {}


def _word_type(
    word: tuple[str, ...],
    gens: dict[str, Generator],
    objects: dict[str, int],
    context: str,
) -> tuple[int, int, list[int]]:
    """Type-check a DSL word; return (src, tgt, generator indices in application order)."""
    if not word:
        raise IllFormed(f"{context}: empty word")
    order = list(gens)
    applied: list[int] = []
    current: int | None = None
    start: int | None = None
    for token in reversed(word):
        if token in gens:
            gen = gens[token]
            s, t = objects[gen.src], objects[gen.tgt]
            applied.append(order.index(token))
        elif token.startswith(IDENTITY_PREFIX) and token[len(IDENTITY_PREFIX):] in objects:
            s = t = objects[token[len(IDENTITY_PREFIX):]]
        else:
            raise IllFormed(f"{context}: unknown arrow {token!r}")
        if current is not None and current != s:
            raise IllFormed(f"{context}: word {'.'.join(word)} is not composable")
        if start is None:
            start = s
        current = t
    assert start is not None and current is not None
    return start, current, applied


def _check(pres: Presentation) -> tuple[dict[str, int], dict[str, Generator]]:
    objects: dict[str, int] = {}
    for label in pres.objects:
        if label in objects:
            raise IllFormed(f"{pres.name}: duplicate object {label!r}")
        objects[label] = len(objects)
    gens: dict[str, Generator] = {}
    reserved = {IDENTITY_PREFIX + label for label in pres.objects}
    for gen in pres.generators:
        if gen.name in gens or gen.name in reserved:
            raise IllFormed(f"{pres.name}: duplicate or reserved arrow name {gen.name!r}")
        if gen.src not in objects or gen.tgt not in objects:
            raise IllFormed(f"{pres.name}: arrow {gen.name} has a dangling endpoint")
        if "." in gen.name:
            raise IllFormed(f"{pres.name}: arrow name {gen.name!r} contains '.'")
        gens[gen.name] = gen
    for rel in pres.relations:
        context = f"{pres.name}: relation {'.'.join(rel.lhs)} = {'.'.join(rel.rhs)}"
        ls, lt, _ = _word_type(rel.lhs, gens, objects, context)
        rs, rt, _ = _word_type(rel.rhs, gens, objects, context)
        if (ls, lt) != (rs, rt):
            raise IllFormed(f"{context}: sides are not parallel")
    return objects, gens


def node_cap(max_morphisms: int) -> int:
    """Default bound on coset-table nodes defined while compiling."""
    return NODES_PER_MORPHISM * max_morphisms + NODE_SLACK


def compile_with_words(
    pres: Presentation, max_morphisms: int, max_nodes: int | None = None
) -> tuple[FinCat, tuple[tuple[int, ...], ...]]:
    """Compile a presentation and return each morphism's representative word.

    Words list generator indices in application order; identities have the
    empty word. Enumeration may define more nodes than the final number of
    morphisms; at most ``max_nodes`` (default ``node_cap(max_morphisms)``)
    are allowed.

    Raises:
        IllFormed: Dangling names, non-composable or non-parallel relations
        BudgetExceeded: More than max_morphisms classes, or the enumeration
            did not close within its transient node cap
    """
    if max_morphisms < 1:
        raise IllFormed("max_morphisms must be positive")
    if max_nodes is not None and max_nodes < 1:
        raise IllFormed("max_nodes must be positive")
    objects, gens = _check(pres)
    gen_list = list(gens.values())
    gen_src = [objects[g.src] for g in gen_list]
    gen_tgt = [objects[g.tgt] for g in gen_list]
    relations: list[tuple[int, list[int], list[int]]] = []
    for rel in pres.relations:
        s, _, lhs = _word_type(rel.lhs, gens, objects, pres.name)
        _, _, rhs = _word_type(rel.rhs, gens, objects, pres.name)
        relations.append((s, lhs, rhs))

    n_objects = len(objects)
    cap = node_cap(max_morphisms) if max_nodes is None else max_nodes
    state = _Enumeration(n_objects, gen_src, gen_tgt, cap)
    try:
        cursor = 0
        while cursor < len(state.nodes):
            if state.find(cursor) == cursor:
                tgt = state.nodes[cursor].tgt
                for g in range(len(gen_list)):
                    if gen_src[g] == tgt:
                        state.follow(cursor, g)
                for s, lhs, rhs in relations:
                    if s != tgt or state.find(cursor) != cursor:
                        continue
                    a = state.trace(cursor, lhs)
                    b = state.trace(cursor, rhs)
                    if a != b:
                        state.coincidence(a, b)
            cursor += 1
    except BudgetExceeded as e:
        logger.info("presentation_budget_exceeded", presentation=pres.name, budget=max_morphisms, nodes=cap)
        raise BudgetExceeded(
            f"{pres.name}: closure did not stabilize within {max_morphisms} morphisms "
            f"({cap} transient nodes; the category may be infinite)",
            max_morphisms,
        ) from e

    if state.live > max_morphisms:
        raise BudgetExceeded(
            f"{pres.name}: {state.live} morphisms exceed the budget of {max_morphisms}",
            max_morphisms,
        )

    # shortlex representatives by breadth-first search from each identity
    words: dict[int, tuple[int, ...]] = {}
    discovery: list[int] = []
    for x in range(n_objects):
        start = state.find(x)
        words[start] = ()
        queue: deque[int] = deque([start])
        while queue:
            n = queue.popleft()
            discovery.append(n)
            for g in range(len(gen_list)):
                if gen_src[g] != state.nodes[n].tgt:
                    continue
                t = state.find(state.nodes[n].edges[g])
                if t not in words:
                    words[t] = words[n] + (g,)
                    queue.append(t)

    identities = [state.find(x) for x in range(n_objects)]
    identity_set = set(identities)
    rank = {n: k for k, n in enumerate(discovery)}
    others = sorted(
        (n for n in discovery if n not in identity_set),
        key=lambda n: (len(words[n]), state.nodes[n].src, rank[n]),
    )
    order = identities + others
    index = {n: k for k, n in enumerate(order)}
    labels = list(objects)

    def morphism_name(n: int) -> str:
        if n in identity_set:
            return IDENTITY_PREFIX + labels[state.nodes[n].src]
        return ".".join(gen_list[g].name for g in reversed(words[n]))

    def compose(g: int, f: int) -> int:
        node = order[f]
        for letter in words[order[g]]:
            node = state.find(state.nodes[node].edges[letter])
        return index[node]

    category = build_category(
        labels,
        [(morphism_name(n), state.nodes[n].src, state.nodes[n].tgt) for n in order],
        list(range(n_objects)),
        compose,
        name=pres.name,
    )
    logger.debug(
        "presentation_compiled",
        presentation=pres.name,
        morphisms=category.n_morphisms,
        nodes_defined=len(state.nodes),
    )
    return category, tuple(words[n] for n in order)


def compile_presentation(pres: Presentation, max_morphisms: int, max_nodes: int | None = None) -> FinCat:
    """Compile a presentation to an explicit composition table.

    Morphisms are ordered identities first (object order), then by
    representative word length. Identities are named ``id_x``, single
    generators keep their name and longer words are written ``g.f``.

    Args:
        pres: Presentation to compile
        max_morphisms: Maximum number of morphism classes
        max_nodes: Bound on nodes defined during enumeration (default node_cap)

    Returns:
        Compiled FinCat

    Raises:
        IllFormed: Malformed presentation
        BudgetExceeded: Closure did not stabilize within the bound
    """
    category, _ = compile_with_words(pres, max_morphisms, max_nodes)
    return category
