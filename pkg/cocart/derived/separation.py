"""Seeded search for functors with a Kan extension but no left derived functor."""

from __future__ import annotations

import random
from collections.abc import Callable
from dataclasses import dataclass
from typing import Any

from cocart.core.category import FinCat, chain, preorder
from cocart.core.exceptions import BudgetExceeded, NotCertified
from cocart.core.functor import FunctorData, compose_functors
from cocart.core.marking import Marking, all_morphisms, isos_only, marking_from_names
from cocart.core.natural import NatTrans
from cocart.core.sampling import random_functor, random_poset
from cocart.derived.functors import left_derived
from cocart.derived.kan import right_kan_extension
from cocart.derived.models import DerivedResult, DerivedStatus
from cocart.localization.engine import DEFAULT_DEPTH
from cocart.utils.logging import get_logger

logger = get_logger(__name__)


def cospan() -> FinCat:
    """a → c ← b."""
    return preorder(["a", "b", "c"], [("a", "c"), ("b", "c")], name="Cospan")


def _cospan_inverted() -> tuple[FinCat, Marking]:
    C = cospan()
    return C, all_morphisms(C)


def _arrow_inverted() -> tuple[FinCat, Marking]:
    C = chain(1)
    return C, marking_from_names(C, ["0->1"])


def _chain_partly_inverted() -> tuple[FinCat, Marking]:
    C = chain(2)
    return C, marking_from_names(C, ["1->2"])


SHAPES: tuple[Callable[[], tuple[FinCat, Marking]], ...] = (
    _cospan_inverted,
    _arrow_inverted,
    _chain_partly_inverted,
)


@dataclass(frozen=True)
class SeparationInstance:
    """A functor whose localized correspondence is not cocartesian although
    the right Kan extension of q_D∘f along q_C exists."""

    seed: int
    attempt: int
    functor: FunctorData
    source_marking: Marking
    target_marking: Marking
    derived: DerivedResult
    kan: tuple[FunctorData, NatTrans]

    def to_dict(self) -> dict[str, Any]:
        """Convert to dictionary."""
        f = self.functor
        kan_functor, theta = self.kan
        return {
            "seed": self.seed,
            "attempt": self.attempt,
            "source": f.source.to_dict(),
            "target": f.target.to_dict(),
            "functor": f.to_dict(),
            "source_marking": self.source_marking.to_dict(),
            "left_derived": self.derived.status.value,
            "obstruction": self.derived.obstruction,
            "kan_extension": kan_functor.to_dict(),
            "theta": theta.to_dict(),
        }


def find_separation_instance(
    seed: int = 0, attempts: int = 200, depth: int = DEFAULT_DEPTH
) -> SeparationInstance | None:
    """Sample (f, W_C) until left_derived fails while the Kan extension exists.

    Targets are random posets or chains with only identities marked, so
    q_D is an isomorphism onto D.
    """
    rng = random.Random(seed)
    for attempt in range(attempts):
        C, W_C = rng.choice(SHAPES)()
        D = random_poset(rng, max_objects=4, density=0.5) if rng.random() < 0.5 else chain(rng.randint(1, 3))
        f = random_functor(rng, C, D)
        W_D = isos_only(D)
        try:
            result = left_derived(f, W_C, W_D, depth=depth)
        except (BudgetExceeded, NotCertified) as e:
            logger.debug("separation_attempt_skipped", attempt=attempt, reason=str(e))
            continue
        if result.status is not DerivedStatus.FAILS_COCARTESIAN:
            continue
        q_C, q_D = result.q_C, result.q_D
        if q_C is None or q_D is None:
            continue
        kan = right_kan_extension(compose_functors(q_D, f), q_C)
        if kan is None:
            continue
        logger.info("separation_found", seed=seed, attempt=attempt, source=C.name, target=D.name)
        return SeparationInstance(seed, attempt, f, W_C, W_D, result, kan)
    logger.info("separation_not_found", seed=seed, attempts=attempts)
    return None
