"""Left and right derived functors through localized correspondences."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

from cocart.core.exceptions import InternalContradiction, NotConverged, NotPreserving
from cocart.core.functor import (
    FunctorData,
    compose_functors,
    dual_functor,
    invert_isomorphism,
    is_bijective,
)
from cocart.core.marking import Marking
from cocart.core.natural import NatTrans, check_natural, find_natural_isomorphism
from cocart.derived.models import DerivedResult, DerivedStatus, Side
from cocart.fibrations.cocartesian import CocartWitness, check_cocartesian, cocartesian_obstruction
from cocart.fibrations.correspondence import Correspondence
from cocart.fibrations.grothendieck import grothendieck_chain
from cocart.localization.engine import (
    DEFAULT_DEPTH,
    MethodChoice,
    induced_functor,
    localize,
    localize_correspondence,
)
from cocart.localization.models import LocalizationResult
from cocart.utils.logging import get_logger

logger = get_logger(__name__)


def fiber_marking(X: Correspondence, markings: Sequence[Marking]) -> Marking:
    """Union of per-fiber markings as a marking of the total category."""
    members: set[int] = set()
    for i, W in enumerate(markings):
        _, morphisms = X.fiber_embedding(i)
        members.update(morphisms[m] for m in W)
    return Marking(X.total, frozenset(members))


def localized_chain(
    functors: Sequence[FunctorData],
    markings: Sequence[Marking],
    method: MethodChoice = "auto",
    depth: int = DEFAULT_DEPTH,
    max_words: int = 200_000,
) -> tuple[Correspondence, Correspondence]:
    """The Grothendieck construction of a chain and its fiberwise localization.

    Raises:
        NotConverged: If the localization is not certified
    """
    X = grothendieck_chain(functors)
    return X, localize_correspondence(X, fiber_marking(X, markings), method, depth, max_words)


def localization_functor(localized: Correspondence) -> FunctorData:
    """q: E → E′ of a correspondence built by localize_correspondence."""
    result: LocalizationResult = localized.localization
    if result is None or result.q is None:
        raise InternalContradiction(f"{localized.total.name} carries no localization functor")
    return result.q


def fiber_comparison(
    X: Correspondence, localized: Correspondence, i: int, L: LocalizationResult
) -> FunctorData:
    """Isomorphism from a standalone localization onto fiber i of a localized correspondence.

    Raises:
        InternalContradiction: If the two localizations are not isomorphic
    """
    q = localization_functor(localized)
    fiber = localized.fiber(i)
    _, source_mors = X.fiber_embedding(i)
    _, target_mors = localized.fiber_embedding(i)
    position = {m: k for k, m in enumerate(target_mors)}
    C = L.source
    h = FunctorData(
        C,
        fiber,
        tuple(range(C.n_objects)),
        tuple(position[q.mor_map[source_mors[m]]] for m in range(C.n_morphisms)),
        name=f"j{i}",
    )
    comparison = induced_functor(L, h)
    if not is_bijective(comparison):
        raise InternalContradiction(
            f"fiber {i} of {localized.total.name} is not the standalone localization"
        )
    return comparison


def _unavailable(
    f: FunctorData,
    W_C: Marking,
    W_D: Marking,
    side: Side,
    status: DerivedStatus,
    reason: str,
    localized: Correspondence | None = None,
    localizations: tuple[LocalizationResult, LocalizationResult] | None = None,
) -> DerivedResult:
    logger.info(
        "derived_unavailable", functor=f.name, side=side.value, status=status.value, reason=reason
    )
    L_C, L_D = localizations or (None, None)
    return DerivedResult(
        status,
        side,
        f,
        W_C,
        W_D,
        source_localization=L_C,
        target_localization=L_D,
        localized=localized,
        obstruction=reason,
    )


def _certified_pair(
    f: FunctorData, W_C: Marking, W_D: Marking, method: MethodChoice, depth: int, max_words: int
) -> tuple[LocalizationResult, LocalizationResult] | None:
    L_C = localize(f.source, W_C, method, depth, max_words)
    L_D = localize(f.target, W_D, method, depth, max_words)
    if not (L_C.certified and L_D.certified):
        return None
    return L_C, L_D


@dataclass(frozen=True)
class StagedCorrespondence:
    """E_f, its localization E′_f and the fiber identifications.

    ``a_C`` and ``a_D`` carry the standalone localizations onto fibers 0
    and 1 of E′_f; the ``*_inv`` maps go back.
    """

    original: Correspondence
    localized: Correspondence
    source_localization: LocalizationResult
    target_localization: LocalizationResult
    a_C: FunctorData
    a_C_inv: FunctorData
    a_D: FunctorData
    a_D_inv: FunctorData

    def fiber_position(self, i: int) -> dict[int, int]:
        """Total morphism index to its index in fiber i of E′_f."""
        _, morphisms = self.localized.fiber_embedding(i)
        return {m: k for k, m in enumerate(morphisms)}

    def factor_after(self, lift: int, target: int, level: int) -> int:
        """The unique b in fiber ``level`` with b∘lift = target.

        Raises:
            InternalContradiction: If the factorization is missing or not unique
        """
        T = self.localized.total
        matches = [b for b in T.hom(T.tgt[lift], T.tgt[target]) if T.comp[(b, lift)] == target]
        return self._unique(matches, lift, target, level)

    def factor_before(self, lift: int, target: int, level: int) -> int:
        """The unique b in fiber ``level`` with lift∘b = target.

        Raises:
            InternalContradiction: If the factorization is missing or not unique
        """
        T = self.localized.total
        matches = [b for b in T.hom(T.src[target], T.src[lift]) if T.comp[(lift, b)] == target]
        return self._unique(matches, lift, target, level)

    def _unique(self, matches: list[int], lift: int, target: int, level: int) -> int:
        if len(matches) != 1:
            T = self.localized.total
            raise InternalContradiction(f"{T.names[target]} does not factor uniquely through {T.names[lift]}")
        return self.fiber_position(level)[matches[0]]


def stage_correspondence(
    f: FunctorData,
    W_C: Marking,
    W_D: Marking,
    method: MethodChoice = "auto",
    depth: int = DEFAULT_DEPTH,
    max_words: int = 200_000,
) -> StagedCorrespondence | str:
    """Localize E_f at W_C ∪ W_D once and identify its fibers.

    Returns:
        The staged correspondence, or the reason it is not certified
    """
    pair = _certified_pair(f, W_C, W_D, method, depth, max_words)
    if pair is None:
        return "fiber localization not certified"
    L_C, L_D = pair
    try:
        X, Xp = localized_chain([f], [W_C, W_D], method, depth, max_words)
    except NotConverged:
        return "localized correspondence not certified"
    a_C = fiber_comparison(X, Xp, 0, L_C)
    a_D = fiber_comparison(X, Xp, 1, L_D)
    return StagedCorrespondence(
        X, Xp, L_C, L_D, a_C, invert_isomorphism(a_C), a_D, invert_isomorphism(a_D)
    )


def left_from_witness(
    f: FunctorData,
    W_C: Marking,
    W_D: Marking,
    staged: StagedCorrespondence,
    witness: CocartWitness,
) -> DerivedResult:
    """𝐋f and θ read off the chosen cocartesian lifts of E′_f.

    θ_x is the fiber part of the image of <x, id> behind the lift out of x.

    Raises:
        InternalContradiction: If θ is not determined or not natural
    """
    X, Xp = staged.original, staged.localized
    L_C, L_D = staged.source_localization, staged.target_localization
    derived = compose_functors(
        staged.a_D_inv, compose_functors(witness.classifying[0], staged.a_C)
    ).renamed(f"L{f.name or 'f'}")

    q_X = localization_functor(Xp)
    components: list[int] = []
    for x in range(f.source.n_objects):
        image = q_X.mor_map[X.cross_index[(0, x, 1, f.target.identity[f.obj_map[x]])]]
        components.append(staged.a_D_inv.mor_map[staged.factor_after(witness.lifts[0][x], image, 1)])
    assert L_C.q is not None and L_D.q is not None
    theta = NatTrans(
        compose_functors(derived, L_C.q), compose_functors(L_D.q, f), tuple(components)
    )
    issues = check_natural(theta)
    if issues:
        raise InternalContradiction(f"θ of {derived.name} is not natural: {issues[0]}")
    logger.info("derived_computed", functor=f.name, side=Side.LEFT.value)
    return DerivedResult(
        DerivedStatus.EXISTS,
        Side.LEFT,
        f,
        W_C,
        W_D,
        source_localization=L_C,
        target_localization=L_D,
        localized=Xp,
        derived=derived,
        theta=theta,
        witness=witness,
    )


def left_derived(
    f: FunctorData,
    W_C: Marking,
    W_D: Marking,
    method: MethodChoice = "auto",
    depth: int = DEFAULT_DEPTH,
    max_words: int = 200_000,
) -> DerivedResult:
    """𝐋f: C′ → D′ classifying the localized cocartesian fibration E′_f.

    The fibers of E′_f are identified with the standalone localizations of
    (C, W_C) and (D, W_D).
    """
    side = Side.LEFT
    staged = stage_correspondence(f, W_C, W_D, method, depth, max_words)
    if isinstance(staged, str):
        return _unavailable(f, W_C, W_D, side, DerivedStatus.NOT_CERTIFIED, staged)
    Xp = staged.localized
    witness = check_cocartesian(Xp)
    if witness is None:
        blocked = cocartesian_obstruction(Xp)
        reason = "localized correspondence is not cocartesian"
        if blocked is not None:
            reason = f"no cocartesian lift out of {Xp.total.objects[blocked]}"
        return _unavailable(
            f,
            W_C,
            W_D,
            side,
            DerivedStatus.FAILS_COCARTESIAN,
            reason,
            Xp,
            (staged.source_localization, staged.target_localization),
        )
    return left_from_witness(f, W_C, W_D, staged, witness)


def _opposite_comparison(L: LocalizationResult, L_op: LocalizationResult) -> FunctorData:
    """Isomorphism C′ → ((C^op)′)^op induced by the dual of the opposite localization."""
    assert L_op.q is not None
    comparison = induced_functor(L, dual_functor(L_op.q))
    if not is_bijective(comparison):
        raise InternalContradiction(f"localizations of {L.source.name} and its opposite disagree")
    return comparison


def right_derived(
    f: FunctorData,
    W_C: Marking,
    W_D: Marking,
    method: MethodChoice = "auto",
    depth: int = DEFAULT_DEPTH,
    max_words: int = 200_000,
) -> DerivedResult:
    """𝐑f: C′ → D′, computed as the dual of 𝐋(f^op).

    The dual result is carried back to the canonical localizations of
    (C, W_C) and (D, W_D); θ goes from q_D∘f to 𝐑f∘q_C.
    """
    side = Side.RIGHT
    dual = left_derived(dual_functor(f), W_C.opposite(), W_D.opposite(), method, depth, max_words)
    localized = None if dual.localized is None else dual.localized.opposite()
    if not dual.exists:
        return _unavailable(
            f, W_C, W_D, side, dual.status, dual.obstruction or "dual pipeline failed", localized
        )
    pair = _certified_pair(f, W_C, W_D, method, depth, max_words)
    if pair is None:
        return _unavailable(
            f, W_C, W_D, side, DerivedStatus.NOT_CERTIFIED, "fiber localization not certified"
        )
    L_C, L_D = pair
    assert dual.derived is not None and dual.theta is not None
    assert dual.source_localization is not None and dual.target_localization is not None
    k_C = _opposite_comparison(L_C, dual.source_localization)
    k_D_inv = invert_isomorphism(_opposite_comparison(L_D, dual.target_localization))
    derived = compose_functors(
        k_D_inv, compose_functors(dual_functor(dual.derived), k_C)
    ).renamed(f"R{f.name or 'f'}")
    assert L_C.q is not None and L_D.q is not None
    theta = NatTrans(
        compose_functors(L_D.q, f),
        compose_functors(derived, L_C.q),
        tuple(k_D_inv.mor_map[m] for m in dual.theta.components),
    )
    issues = check_natural(theta)
    if issues:
        raise InternalContradiction(f"θ of {derived.name} is not natural: {issues[0]}")
    logger.info("derived_computed", functor=f.name, side=side.value)
    return DerivedResult(
        DerivedStatus.EXISTS,
        side,
        f,
        W_C,
        W_D,
        source_localization=L_C,
        target_localization=L_D,
        localized=localized,
        derived=derived,
        theta=theta,
        witness=dual.witness,
    )


def derive_preserving(
    f: FunctorData,
    W_C: Marking,
    W_D: Marking,
    method: MethodChoice = "auto",
    depth: int = DEFAULT_DEPTH,
    max_words: int = 200_000,
    cross_check: bool = True,
) -> DerivedResult:
    """The factorization f′ of q_D∘f through q_C for f with f(W_C) ⊆ W_D.

    f′ is both the left and the right derived functor; with ``cross_check``
    both pipelines are run and must agree up to natural isomorphism.

    Raises:
        NotPreserving: If f does not carry W_C into W_D
        InternalContradiction: If a pipeline disagrees with f′
    """
    if not W_C.maps_into(f, W_D):
        raise NotPreserving(f"{f.name or 'functor'} does not carry W_C into W_D")
    pair = _certified_pair(f, W_C, W_D, method, depth, max_words)
    if pair is None:
        return _unavailable(
            f, W_C, W_D, Side.LEFT, DerivedStatus.NOT_CERTIFIED, "fiber localization not certified"
        )
    L_C, L_D = pair
    assert L_C.q is not None and L_D.q is not None
    h = compose_functors(L_D.q, f)
    induced = induced_functor(L_C, h).renamed(f"{f.name or 'f'}'")
    theta = NatTrans(
        compose_functors(induced, L_C.q), h, tuple(h.target.identity[y] for y in h.obj_map)
    )
    if cross_check:
        for pipeline in (left_derived, right_derived):
            other = pipeline(f, W_C, W_D, method, depth, max_words)
            if other.status is DerivedStatus.NOT_CERTIFIED:
                logger.warning("cross_check_skipped", functor=f.name, side=other.side.value)
                continue
            if other.derived is None:
                raise InternalContradiction(
                    f"{other.side.value} derived functor of a W-preserving functor is missing"
                )
            if find_natural_isomorphism(other.derived, induced) is None:
                raise InternalContradiction(
                    f"{other.side.value} derived functor differs from the induced functor"
                )
    return DerivedResult(
        DerivedStatus.EXISTS,
        Side.LEFT,
        f,
        W_C,
        W_D,
        source_localization=L_C,
        target_localization=L_D,
        derived=induced,
        theta=theta,
        method="preserving",
    )
