"""Cocartesian and cartesian arrows, witnesses and classifying functors."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Literal

from cocart.core.exceptions import BadDegrees, InternalContradiction, NotCocartesian
from cocart.core.functor import FunctorData, check_functor, dual_functor
from cocart.core.natural import NatTrans, find_natural_isomorphism
from cocart.fibrations.correspondence import Correspondence
from cocart.utils.logging import get_logger

logger = get_logger(__name__)

Choice = Literal["least", "greatest"]


@dataclass(frozen=True)
class CocartWitness:
    """Chosen cocartesian lifts and the functors they classify.

    ``lifts[i][k]`` is the total morphism chosen out of the ``k``-th object
    of level ``i`` into level ``i + 1``; ``classifying[i]`` is the induced
    functor between the fibers over ``i`` and ``i + 1``.
    """

    correspondence: Correspondence
    lifts: tuple[tuple[int, ...], ...]
    classifying: tuple[FunctorData, ...]

    def lift(self, x: int) -> int:
        """Chosen lift out of a total object (levels below n only)."""
        X = self.correspondence
        i = X.degree[x]
        return self.lifts[i][X.objects_of_degree(i).index(x)]

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary."""
        T = self.correspondence.total
        return {
            "lifts": [[T.names[m] for m in level] for level in self.lifts],
            "classifying": [F.to_dict() for F in self.classifying],
        }


def is_cocartesian_arrow(X: Correspondence, m: int) -> bool:
    """Check that precomposition with m: x → y is bijective onto Hom(x, z).

    Only targets z at or above the level of y matter; below it both sides
    are empty.

    Raises:
        BadDegrees: If m does not raise the degree
    """
    T = X.total
    T.check_morphism(m)
    x, y = T.src[m], T.tgt[m]
    if X.degree[x] >= X.degree[y]:
        raise BadDegrees(f"{T.names[m]} does not lie over a non-identity arrow of [{X.base_length}]")
    level = X.degree[y]
    for z in range(T.n_objects):
        if X.degree[z] < level:
            continue
        image = {T.comp[(b, m)] for b in T.hom(y, z)}
        if len(image) != len(T.hom(y, z)) or len(image) != len(T.hom(x, z)):
            return False
    return True


def _choose_lift(X: Correspondence, x: int, choose: Choice) -> int | None:
    T = X.total
    level = X.degree[x] + 1
    candidates = [m for m in T.out_of(x) if X.degree[T.tgt[m]] == level]
    if choose == "greatest":
        candidates.reverse()
    return next((m for m in candidates if is_cocartesian_arrow(X, m)), None)


def _classifying_functor(X: Correspondence, i: int, lifts: tuple[int, ...]) -> FunctorData:
    T = X.total
    src_objects, src_morphisms = X.fiber_embedding(i)
    tgt_objects, tgt_morphisms = X.fiber_embedding(i + 1)
    tgt_obj_pos = {x: k for k, x in enumerate(tgt_objects)}
    tgt_mor_pos = {m: k for k, m in enumerate(tgt_morphisms)}
    src_obj_pos = {x: k for k, x in enumerate(src_objects)}
    obj_map = tuple(tgt_obj_pos[T.tgt[lift]] for lift in lifts)
    mor_map: list[int] = []
    for a in src_morphisms:
        start, end = lifts[src_obj_pos[T.src[a]]], lifts[src_obj_pos[T.tgt[a]]]
        target = T.comp[(end, a)]
        matches = [b for b in T.hom(T.tgt[start], T.tgt[end]) if T.comp[(b, start)] == target]
        if len(matches) != 1:
            raise InternalContradiction(f"cocartesian lift does not determine the image of {T.names[a]}")
        mor_map.append(tgt_mor_pos[matches[0]])
    F = FunctorData(X.fiber(i), X.fiber(i + 1), obj_map, tuple(mor_map), name=f"cl{i}")
    issues = check_functor(F)
    if issues:
        raise InternalContradiction(f"classifying map is not a functor: {issues[0]}")
    return F


def check_cocartesian(X: Correspondence, choose: Choice = "least") -> CocartWitness | None:
    """Witness that X → [n] is a cocartesian fibration, or None.

    Every object below the top level needs a cocartesian arrow into the
    next level; the least (or greatest) index is chosen. Over longer chains
    composites of chosen lifts are checked to stay cocartesian.
    """
    lifts: list[tuple[int, ...]] = []
    for i in range(X.base_length):
        chosen: list[int] = []
        for x in X.objects_of_degree(i):
            m = _choose_lift(X, x, choose)
            if m is None:
                logger.debug("no_cocartesian_lift", correspondence=X.total.name, object=X.total.objects[x])
                return None
            chosen.append(m)
        lifts.append(tuple(chosen))

    T = X.total
    for i in range(X.base_length):
        for k, x in enumerate(X.objects_of_degree(i)):
            path = lifts[i][k]
            for j in range(i + 1, X.base_length):
                y = T.tgt[path]
                path = T.comp[(lifts[j][X.objects_of_degree(j).index(y)], path)]
                if not is_cocartesian_arrow(X, path):
                    raise InternalContradiction(f"composite of lifts out of {T.objects[x]} is not cocartesian")
    classifying = tuple(_classifying_functor(X, i, lifts[i]) for i in range(X.base_length))
    return CocartWitness(X, tuple(lifts), classifying)


def cocartesian_obstruction(X: Correspondence) -> int | None:
    """First object (by level, then index) without a cocartesian lift."""
    for i in range(X.base_length):
        for x in X.objects_of_degree(i):
            if _choose_lift(X, x, "least") is None:
                return x
    return None


def classify_cocartesian(
    X: Correspondence, w: CocartWitness | None = None, level: int = 0
) -> FunctorData:
    """Functor fiber(level) → fiber(level + 1) classified by X.

    Raises:
        NotCocartesian: If no witness is given and X is not cocartesian
    """
    if w is None:
        w = check_cocartesian(X)
    if w is None:
        raise NotCocartesian(f"{X.total.name} is not a cocartesian fibration")
    return w.classifying[level]


def is_cartesian_arrow(X: Correspondence, m: int) -> bool:
    """Cartesian arrows of X are the cocartesian arrows of its opposite."""
    return is_cocartesian_arrow(X.opposite(), m)


def check_cartesian(X: Correspondence, choose: Choice = "least") -> CocartWitness | None:
    """Witness (for the opposite correspondence) that X → [n] is cartesian."""
    return check_cocartesian(X.opposite(), choose)


def cartesian_obstruction(X: Correspondence) -> int | None:
    """First top-down object without a cartesian lift."""
    return cocartesian_obstruction(X.opposite())


def classify_cartesian(
    X: Correspondence, w: CocartWitness | None = None, level: int = 0
) -> FunctorData:
    """Functor fiber(level + 1) → fiber(level) classified by the cartesian X.

    Raises:
        NotCocartesian: If X is not a cartesian fibration
    """
    op = X.opposite()
    F = classify_cocartesian(op, w, X.base_length - 1 - level)
    return dual_functor(F)


def classification_invariance(X: Correspondence) -> list[NatTrans]:
    """Natural isomorphisms between least- and greatest-lift classifications.

    Raises:
        NotCocartesian: If X is not cocartesian
        InternalContradiction: If two choices classify non-isomorphic functors
    """
    least = check_cocartesian(X, "least")
    greatest = check_cocartesian(X, "greatest")
    if least is None or greatest is None:
        raise NotCocartesian(f"{X.total.name} is not a cocartesian fibration")
    isos: list[NatTrans] = []
    for F, G in zip(least.classifying, greatest.classifying, strict=True):
        eta = find_natural_isomorphism(F, G)
        if eta is None:
            raise InternalContradiction("classifications from different lifts are not isomorphic")
        isos.append(eta)
    return isos
