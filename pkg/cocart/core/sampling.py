"""Seeded random categories, functors and markings.

Used by the property suites and the separation search. Every generator takes
an explicit ``random.Random`` so results depend only on the seed.
"""

from __future__ import annotations

import random

from cocart.core.category import FinCat, chain, preorder
from cocart.core.exceptions import BudgetExceeded, IllFormed
from cocart.core.functor import FunctorData, constant_functor, enumerate_functors, functors_with_object_map
from cocart.core.marking import Marking, saturate_marking
from cocart.core.presentation import Generator, Presentation, Relation, compile_presentation


def random_poset(rng: random.Random, max_objects: int = 4, density: float = 0.4) -> FinCat:
    """Random finite poset on objects ``p0 < ...`` (relations only go upward)."""
    n = rng.randint(1, max_objects)
    labels = [f"p{i}" for i in range(n)]
    relations = [
        (labels[i], labels[j]) for i in range(n) for j in range(i + 1, n) if rng.random() < density
    ]
    return preorder(labels, relations, name=f"P{n}")


def random_quiver_category(
    rng: random.Random, max_objects: int = 3, max_arrows: int = 3, max_morphisms: int = 10
) -> FinCat:
    """Free category on a random acyclic quiver, possibly with parallel arrows.

    Falls back to a random poset when the free category is too large.
    """
    n = rng.randint(1, max_objects)
    labels = [f"o{i}" for i in range(n)]
    gens: list[Generator] = []
    if n > 1:
        for k in range(rng.randint(0, max_arrows)):
            i = rng.randrange(n - 1)
            j = rng.randrange(i + 1, n)
            gens.append(Generator(f"a{k}", labels[i], labels[j]))
    pres = Presentation(f"Q{n}", tuple(labels), tuple(gens))
    try:
        return compile_presentation(pres, max_morphisms)
    except BudgetExceeded:
        return random_poset(rng, max_objects)


def idempotent_monoid() -> FinCat:
    """One object with an idempotent e (e∘e = e)."""
    pres = Presentation(
        "Idem", ("x",), (Generator("e", "x", "x"),), (Relation(("e", "e"), ("e",)),)
    )
    return compile_presentation(pres, 10)


def random_category(rng: random.Random, max_morphisms: int = 10) -> FinCat:
    """Random small category from a mix of posets, free quivers and monoids."""
    kind = rng.random()
    if kind < 0.45:
        return random_poset(rng)
    if kind < 0.9:
        return random_quiver_category(rng, max_morphisms=max_morphisms)
    return idempotent_monoid()


def random_functor(rng: random.Random, C: FinCat, D: FinCat, attempts: int = 8) -> FunctorData:
    """Random functor C → D; constant when no random object map extends."""
    for _ in range(attempts):
        obj_map = [rng.randrange(D.n_objects) for _ in range(C.n_objects)]
        candidates = list(
            enumerate_functors(C, D, object_filter=lambda x, y: obj_map[x] == y, limit=16)
        )
        if candidates:
            return rng.choice(candidates).renamed("f")
    return constant_functor(C, D, rng.randrange(D.n_objects)).renamed("f")


def random_marking(rng: random.Random, C: FinCat, density: float = 0.4) -> Marking:
    """Saturated marking generated by a random set of non-identity morphisms."""
    return saturate_marking(
        C, [m for m in range(C.n_morphisms) if not C.is_identity(m) and rng.random() < density]
    )


def monotone_map(C: FinCat, D: FinCat, obj_map: list[int]) -> FunctorData:
    """The unique functor between thin categories with a given object map."""
    found = functors_with_object_map(C, D, obj_map)
    if not found:
        raise IllFormed(f"object map {obj_map} is not monotone")
    return found[0]


def random_galois_connection(
    rng: random.Random, max_length: int = 3
) -> tuple[FunctorData, FunctorData]:
    """A random adjunction f ⊣ g between chains.

    A monotone f: [m] → [n] with f(0) = 0 has the right adjoint
    g(q) = max{p | f(p) ≤ q}.
    """
    m, n = rng.randint(1, max_length), rng.randint(1, max_length)
    C, D = chain(m), chain(n)
    values = sorted(rng.randint(0, n) for _ in range(m))
    f_obj = [0, *values]
    g_obj = [max(p for p in range(m + 1) if f_obj[p] <= q) for q in range(n + 1)]
    return (
        monotone_map(C, D, f_obj).renamed("f"),
        monotone_map(D, C, g_obj).renamed("g"),
    )
