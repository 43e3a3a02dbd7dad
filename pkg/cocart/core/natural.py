"""Natural transformations and natural isomorphism search."""

from __future__ import annotations

from collections.abc import Iterator, Sequence
from dataclasses import dataclass
from typing import Any

from cocart.core.category import inverse, is_isomorphism
from cocart.core.exceptions import IllFormed, NotParallel
from cocart.core.functor import FunctorData, compose_functors


@dataclass(frozen=True)
class NatTrans:
    """A natural transformation F ⇒ G given by its components."""

    source: FunctorData
    target: FunctorData
    components: tuple[int, ...]

    def __getitem__(self, x: int) -> int:
        return self.components[x]

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary (object label -> component name)."""
        C, D = self.source.source, self.source.target
        return {C.objects[x]: D.names[m] for x, m in enumerate(self.components)}


def _require_parallel(F: FunctorData, G: FunctorData) -> None:
    if F.source != G.source or F.target != G.target:
        raise NotParallel(
            f"{F.name or 'F'} and {G.name or 'G'} do not share source and target"
        )


def check_natural(eta: NatTrans) -> list[str]:
    """List failing naturality squares (empty iff eta is natural)."""
    F, G = eta.source, eta.target
    _require_parallel(F, G)
    C, D = F.source, F.target
    issues: list[str] = []
    for x in range(C.n_objects):
        c = eta.components[x]
        if D.src[c] != F.obj_map[x] or D.tgt[c] != G.obj_map[x]:
            issues.append(f"component at {C.objects[x]} has wrong endpoints")
    if issues:
        return issues
    for m in range(C.n_morphisms):
        x, y = C.src[m], C.tgt[m]
        lhs = D.comp[(G.mor_map[m], eta.components[x])]
        rhs = D.comp[(eta.components[y], F.mor_map[m])]
        if lhs != rhs:
            issues.append(f"square at {C.names[m]} does not commute")
    return issues


def identity_transformation(F: FunctorData) -> NatTrans:
    """Identity F ⇒ F."""
    D = F.target
    return NatTrans(F, F, tuple(D.identity[y] for y in F.obj_map))


def vertical_compose(eps: NatTrans, eta: NatTrans) -> NatTrans:
    """eps∘eta for eta: F ⇒ G and eps: G ⇒ H."""
    if eta.target != eps.source:
        raise IllFormed("transformations are not composable")
    D = eta.source.target
    return NatTrans(
        eta.source,
        eps.target,
        tuple(D.comp[(e, h)] for e, h in zip(eps.components, eta.components, strict=True)),
    )


def whisker_left(eta: NatTrans, H: FunctorData) -> NatTrans:
    """eta·H: F∘H ⇒ G∘H."""
    return NatTrans(
        compose_functors(eta.source, H),
        compose_functors(eta.target, H),
        tuple(eta.components[y] for y in H.obj_map),
    )


def whisker_right(K: FunctorData, eta: NatTrans) -> NatTrans:
    """K·eta: K∘F ⇒ K∘G."""
    return NatTrans(
        compose_functors(K, eta.source),
        compose_functors(K, eta.target),
        tuple(K.mor_map[c] for c in eta.components),
    )


def is_natural_isomorphism(eta: NatTrans) -> bool:
    """True iff every component is an isomorphism."""
    D = eta.source.target
    return all(is_isomorphism(D, c) for c in eta.components)


def invert_transformation(eta: NatTrans) -> NatTrans:
    """Inverse of a natural isomorphism.

    Raises:
        IllFormed: If some component is not invertible
    """
    D = eta.source.target
    inverses: list[int] = []
    for c in eta.components:
        inv = inverse(D, c)
        if inv is None:
            raise IllFormed("transformation is not invertible")
        inverses.append(inv)
    return NatTrans(eta.target, eta.source, tuple(inverses))


def _transformations(F: FunctorData, G: FunctorData, isos_only: bool) -> Iterator[NatTrans]:
    _require_parallel(F, G)
    C, D = F.source, F.target
    n = C.n_objects
    # squares whose two endpoints are both assigned once object max(x, y) is
    squares: list[list[int]] = [[] for _ in range(n)]
    for m in range(C.n_morphisms):
        squares[max(C.src[m], C.tgt[m])].append(m)
    components = [0] * n

    def assign(x: int) -> Iterator[NatTrans]:
        if x == n:
            yield NatTrans(F, G, tuple(components))
            return
        for c in D.hom(F.obj_map[x], G.obj_map[x]):
            if isos_only and not is_isomorphism(D, c):
                continue
            components[x] = c
            if all(
                D.comp[(G.mor_map[m], components[C.src[m]])]
                == D.comp[(components[C.tgt[m]], F.mor_map[m])]
                for m in squares[x]
            ):
                yield from assign(x + 1)

    yield from assign(0)


def natural_transformations(F: FunctorData, G: FunctorData) -> list[NatTrans]:
    """All natural transformations F ⇒ G in canonical order.

    Raises:
        NotParallel: If F and G do not share source and target
    """
    return list(_transformations(F, G, isos_only=False))


def find_natural_isomorphism(F: FunctorData, G: FunctorData) -> NatTrans | None:
    """First natural isomorphism F ⇒ G in canonical order, if any.

    Raises:
        NotParallel: If F and G do not share source and target
    """
    return next(_transformations(F, G, isos_only=True), None)


def transformation_from_components(
    F: FunctorData, G: FunctorData, components: Sequence[int]
) -> NatTrans:
    """Build and check a transformation.

    Raises:
        IllFormed: If the components are not natural
    """
    eta = NatTrans(F, G, tuple(components))
    issues = check_natural(eta)
    if issues:
        raise IllFormed(f"not natural: {issues[0]}")
    return eta
