"""Equivalences of finite categories."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

from cocart.core.category import inverse
from cocart.core.exceptions import IllFormed
from cocart.core.functor import FunctorData
from cocart.utils.logging import get_logger

logger = get_logger(__name__)


@dataclass(frozen=True)
class EquivalenceWitness:
    """Certificate that a functor F: C → D is an equivalence.

    ``hom_pairs`` is the number of object pairs whose hom-map was checked
    bijective; ``essential[y]`` is ``(x, e)`` with ``e: F(x) → y`` an
    isomorphism of D.
    """

    functor: FunctorData
    hom_pairs: int
    essential: tuple[tuple[int, int], ...]

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary."""
        C, D = self.functor.source, self.functor.target
        return {
            "hom_pairs_checked": self.hom_pairs,
            "essential": {
                D.objects[y]: {"object": C.objects[x], "iso": D.names[e]}
                for y, (x, e) in enumerate(self.essential)
            },
        }


def _hom_bijective(F: FunctorData, x: int, y: int) -> bool:
    C, D = F.source, F.target
    images = [F.mor_map[m] for m in C.hom(x, y)]
    return len(set(images)) == len(images) == len(D.hom(F.obj_map[x], F.obj_map[y]))


def is_fully_faithful(F: FunctorData) -> bool:
    """True iff every hom-map of F is a bijection."""
    C = F.source
    return all(
        _hom_bijective(F, x, y) for x in range(C.n_objects) for y in range(C.n_objects)
    )


def check_equivalence(F: FunctorData) -> EquivalenceWitness | None:
    """Return a witness if F is an equivalence of categories.

    The essential-surjectivity part picks, for every target object, the
    least source object with an isomorphism into it and the least such
    isomorphism.
    """
    C, D = F.source, F.target
    if not is_fully_faithful(F):
        return None
    essential: list[tuple[int, int]] = []
    for y in range(D.n_objects):
        found: tuple[int, int] | None = None
        for x in range(C.n_objects):
            for e in D.hom(F.obj_map[x], y):
                if inverse(D, e) is not None:
                    found = (x, e)
                    break
            if found is not None:
                break
        if found is None:
            logger.debug("not_essentially_surjective", functor=F.name, missing=D.objects[y])
            return None
        essential.append(found)
    return EquivalenceWitness(F, C.n_objects**2, tuple(essential))


def quasi_inverse(F: FunctorData, witness: EquivalenceWitness | None = None) -> FunctorData:
    """Quasi-inverse G: D → C of an equivalence, built from its witness.

    G(y) is the chosen preimage x_y and G(b: y → y') is the unique a with
    F(a) = e_{y'}⁻¹∘b∘e_y.

    Raises:
        IllFormed: If F is not an equivalence
    """
    if witness is None:
        witness = check_equivalence(F)
    if witness is None:
        raise IllFormed(f"{F.name or 'functor'} is not an equivalence")
    C, D = F.source, F.target
    back: dict[int, int] = {}
    for y, (_, e) in enumerate(witness.essential):
        inv = inverse(D, e)
        assert inv is not None
        back[y] = inv
    obj_map = tuple(x for x, _ in witness.essential)
    mor_map: list[int] = []
    for b in range(D.n_morphisms):
        y, y2 = D.src[b], D.tgt[b]
        target = D.comp[(back[y2], D.comp[(b, witness.essential[y][1])])]
        mor_map.append(
            next(a for a in C.hom(obj_map[y], obj_map[y2]) if F.mor_map[a] == target)
        )
    name = f"{F.name}^-" if F.name else ""
    return FunctorData(D, C, obj_map, tuple(mor_map), name=name)
