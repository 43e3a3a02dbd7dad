"""Functors between finite categories."""

from __future__ import annotations

from collections.abc import Callable, Iterator, Sequence
from dataclasses import dataclass, field
from typing import Any

from cocart.core.category import (
    FinCat,
    arrow_category,
    commuting_squares,
    full_subcategory,
    opposite,
    product,
)
from cocart.core.exceptions import IllFormed, NotAFunctor, NotComposable
from cocart.utils.logging import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class FunctorData:
    """Object and morphism maps between two finite categories.

    Equality is on-the-nose equality of the maps.
    """

    source: FinCat
    target: FinCat
    obj_map: tuple[int, ...]
    mor_map: tuple[int, ...]
    name: str = field(default="", compare=False)

    def __repr__(self) -> str:
        return f"FunctorData({self.name or '?'}: {self.source.name} -> {self.target.name})"

    def obj(self, x: int) -> int:
        """Image of an object."""
        return self.obj_map[x]

    def mor(self, m: int) -> int:
        """Image of a morphism."""
        return self.mor_map[m]

    def renamed(self, name: str) -> FunctorData:
        """Same maps under another display name."""
        return FunctorData(self.source, self.target, self.obj_map, self.mor_map, name)

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary (label-keyed tables)."""
        S, T = self.source, self.target
        return {
            "name": self.name,
            "source": S.name,
            "target": T.name,
            "objects": {S.objects[x]: T.objects[y] for x, y in enumerate(self.obj_map)},
            "morphisms": {S.names[m]: T.names[n] for m, n in enumerate(self.mor_map)},
        }


def check_functor(F: FunctorData) -> list[str]:
    """List violated functor conditions (empty iff F is a functor).

    Args:
        F: Candidate functor

    Returns:
        Human-readable issues, e.g. ``"src mismatch at u"``
    """
    S, T = F.source, F.target
    if len(F.obj_map) != S.n_objects or len(F.mor_map) != S.n_morphisms:
        return ["map sizes do not match the source category"]
    if any(not 0 <= y < T.n_objects for y in F.obj_map) or any(
        not 0 <= n < T.n_morphisms for n in F.mor_map
    ):
        return ["image out of range"]
    issues: list[str] = []
    for m in range(S.n_morphisms):
        n = F.mor_map[m]
        if T.src[n] != F.obj_map[S.src[m]]:
            issues.append(f"src mismatch at {S.names[m]}")
        if T.tgt[n] != F.obj_map[S.tgt[m]]:
            issues.append(f"tgt mismatch at {S.names[m]}")
    if issues:
        return issues
    for x in range(S.n_objects):
        if F.mor_map[S.identity[x]] != T.identity[F.obj_map[x]]:
            issues.append(f"identity not preserved at {S.objects[x]}")
    for (g, f), h in S.comp.items():
        if T.comp.get((F.mor_map[g], F.mor_map[f])) != F.mor_map[h]:
            issues.append(f"composition not preserved at {S.names[g]}∘{S.names[f]}")
    return issues


def ensure_functor(F: FunctorData) -> FunctorData:
    """Return F unchanged or raise NotAFunctor listing the first issue."""
    issues = check_functor(F)
    if issues:
        raise NotAFunctor(f"not a functor: {issues[0]}", issues)
    return F


def identity_functor(C: FinCat) -> FunctorData:
    """Identity functor on C."""
    return FunctorData(C, C, tuple(range(C.n_objects)), tuple(range(C.n_morphisms)), name=f"id_{C.name}")


def constant_functor(C: FinCat, D: FinCat, d: int) -> FunctorData:
    """Functor C → D constant at object d."""
    return FunctorData(
        C, D, (d,) * C.n_objects, (D.identity[d],) * C.n_morphisms, name=f"const_{D.objects[d]}"
    )


def compose_functors(G: FunctorData, F: FunctorData) -> FunctorData:
    """Return G∘F.

    Raises:
        NotComposable: If F's target is not G's source
    """
    if F.target != G.source:
        raise NotComposable(f"cannot compose {G.name or 'G'} after {F.name or 'F'}")
    name = f"{G.name}.{F.name}" if G.name and F.name else ""
    return FunctorData(
        F.source,
        G.target,
        tuple(G.obj_map[y] for y in F.obj_map),
        tuple(G.mor_map[n] for n in F.mor_map),
        name=name,
    )


def dual_functor(F: FunctorData) -> FunctorData:
    """F^op: C^op → D^op with the same maps."""
    name = F.name[:-3] if F.name.endswith("^op") else (F.name + "^op" if F.name else "")
    return FunctorData(opposite(F.source), opposite(F.target), F.obj_map, F.mor_map, name=name)


def inclusion_functor(C: FinCat, objects: Sequence[int]) -> FunctorData:
    """Inclusion of the full subcategory on the given objects."""
    sub = full_subcategory(C, objects)
    position = set(objects)
    kept = tuple(m for m in range(C.n_morphisms) if C.src[m] in position and C.tgt[m] in position)
    return FunctorData(sub, C, tuple(objects), kept, name="incl")


def projection(B: FinCat, C: FinCat, factor: int) -> FunctorData:
    """Projection from ``product(B, C)`` onto factor 0 (B) or 1 (C)."""
    P = product(B, C)
    nc, mc = C.n_objects, C.n_morphisms
    if factor == 0:
        return FunctorData(
            P, B, tuple(x // nc for x in range(P.n_objects)), tuple(m // mc for m in range(P.n_morphisms)), name="pr_B"
        )
    if factor == 1:
        return FunctorData(
            P, C, tuple(x % nc for x in range(P.n_objects)), tuple(m % mc for m in range(P.n_morphisms)), name="pr_C"
        )
    raise IllFormed(f"product has no factor {factor}")


def pairing(F: FunctorData, G: FunctorData) -> FunctorData:
    """The functor (F, G): X → B×C for F: X → B and G: X → C."""
    if F.source != G.source:
        raise IllFormed("pairing needs functors with a common source")
    B, C = F.target, G.target
    return FunctorData(
        F.source,
        product(B, C),
        tuple(b * C.n_objects + c for b, c in zip(F.obj_map, G.obj_map, strict=True)),
        tuple(b * C.n_morphisms + c for b, c in zip(F.mor_map, G.mor_map, strict=True)),
    )


def is_bijective(F: FunctorData) -> bool:
    """True iff F is an isomorphism of categories."""
    return (
        len(set(F.obj_map)) == F.target.n_objects == F.source.n_objects
        and len(set(F.mor_map)) == F.target.n_morphisms == F.source.n_morphisms
    )


def invert_isomorphism(F: FunctorData) -> FunctorData:
    """Inverse of a bijective functor.

    Raises:
        IllFormed: If F is not bijective on objects and morphisms
    """
    if not is_bijective(F):
        raise IllFormed(f"{F.name or 'functor'} is not an isomorphism of categories")
    obj_inv = [0] * F.target.n_objects
    for x, y in enumerate(F.obj_map):
        obj_inv[y] = x
    mor_inv = [0] * F.target.n_morphisms
    for m, n in enumerate(F.mor_map):
        mor_inv[n] = m
    return FunctorData(F.target, F.source, tuple(obj_inv), tuple(mor_inv), name=f"{F.name}^-1" if F.name else "")


def _composition_checks(C: FinCat) -> list[list[tuple[int, int, int]]]:
    """Bucket (g, f, g∘f) by the largest index among the three."""
    buckets: list[list[tuple[int, int, int]]] = [[] for _ in range(C.n_morphisms)]
    for (g, f), h in C.comp.items():
        buckets[max(g, f, h)].append((g, f, h))
    return buckets


def enumerate_functors(
    C: FinCat,
    D: FinCat,
    object_filter: Callable[[int, int], bool] | None = None,
    limit: int | None = None,
) -> Iterator[FunctorData]:
    """Enumerate all functors C → D in canonical (lexicographic) order.

    Object maps are enumerated first; morphisms are assigned in index order
    and each composition constraint is checked as soon as all three of its
    morphisms are assigned.

    Args:
        C: Source category
        D: Target category
        object_filter: Optional predicate (object of C, object of D) restricting images
        limit: Stop after this many functors

    Yields:
        FunctorData instances
    """
    n_obj, n_mor = C.n_objects, C.n_morphisms
    checks = _composition_checks(C)
    obj_map = [0] * n_obj
    mor_map = [0] * n_mor
    produced = 0

    def assign_morphisms(k: int) -> Iterator[FunctorData]:
        if k == n_mor:
            yield FunctorData(C, D, tuple(obj_map), tuple(mor_map))
            return
        a, b = obj_map[C.src[k]], obj_map[C.tgt[k]]
        candidates: Sequence[int] = (D.identity[a],) if C.is_identity(k) else D.hom(a, b)
        for n in candidates:
            mor_map[k] = n
            if all(D.comp.get((mor_map[g], mor_map[f])) == mor_map[h] for g, f, h in checks[k]):
                yield from assign_morphisms(k + 1)

    def assign_objects(x: int) -> Iterator[FunctorData]:
        if x == n_obj:
            yield from assign_morphisms(0)
            return
        for y in range(D.n_objects):
            if object_filter is not None and not object_filter(x, y):
                continue
            obj_map[x] = y
            yield from assign_objects(x + 1)

    for functor in assign_objects(0):
        yield functor
        produced += 1
        if limit is not None and produced >= limit:
            return


def functors_with_object_map(C: FinCat, D: FinCat, obj_map: Sequence[int]) -> list[FunctorData]:
    """All functors C → D with a prescribed object map."""
    return list(enumerate_functors(C, D, object_filter=lambda x, y: obj_map[x] == y))


def arrow_endpoints(C: FinCat) -> tuple[FunctorData, FunctorData]:
    """Domain and codomain functors C^[1] → C."""
    A = arrow_category(C)
    squares = commuting_squares(C)
    dom = FunctorData(A, C, C.src, tuple(a for _, _, a, _ in squares), name="dom")
    cod = FunctorData(A, C, C.tgt, tuple(b for _, _, _, b in squares), name="cod")
    return dom, cod
