"""Isomorphism search between composition tables."""

from __future__ import annotations

import itertools
from collections.abc import Callable, Iterator

from cocart.core.category import FinCat
from cocart.core.functor import FunctorData, enumerate_functors, is_bijective


def _hom_profile(C: FinCat, x: int) -> tuple[int, int, int]:
    return (len(C.hom(x, x)), len(C.out_of(x)), len(C.into(x)))


def _object_bijections(
    C: FinCat, D: FinCat, object_filter: Callable[[int, int], bool] | None
) -> Iterator[tuple[int, ...]]:
    profiles = [_hom_profile(D, y) for y in range(D.n_objects)]
    candidates = [
        [
            y
            for y in range(D.n_objects)
            if profiles[y] == _hom_profile(C, x) and (object_filter is None or object_filter(x, y))
        ]
        for x in range(C.n_objects)
    ]
    for choice in itertools.product(*candidates):
        if len(set(choice)) != len(choice):
            continue
        if all(
            len(C.hom(x, x2)) == len(D.hom(choice[x], choice[x2]))
            for x in range(C.n_objects)
            for x2 in range(C.n_objects)
        ):
            yield choice


def find_isomorphism(
    C: FinCat,
    D: FinCat,
    fix_objects: bool = False,
    object_filter: Callable[[int, int], bool] | None = None,
) -> FunctorData | None:
    """First isomorphism of categories C → D in canonical order.

    Args:
        C: Source table
        D: Target table
        fix_objects: Only consider the identity map on object indices
        object_filter: Extra restriction (object of C, object of D)

    Returns:
        A bijective functor, or None if the tables are not isomorphic
    """
    if C.n_objects != D.n_objects or C.n_morphisms != D.n_morphisms:
        return None
    if fix_objects:
        base = object_filter
        object_filter = lambda x, y: x == y and (base is None or base(x, y))  # noqa: E731
    for obj_map in _object_bijections(C, D, object_filter):
        for F in enumerate_functors(C, D, object_filter=lambda x, y, m=obj_map: m[x] == y):
            if is_bijective(F):
                return F.renamed("iso")
    return None


def isomorphic(C: FinCat, D: FinCat) -> bool:
    """True iff the composition tables are isomorphic."""
    return find_isomorphism(C, D) is not None
