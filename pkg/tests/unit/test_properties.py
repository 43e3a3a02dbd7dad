"""Hypothesis property suites over randomly sampled small categories."""

from __future__ import annotations

import dataclasses
import random

import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from cocart.core.category import FinCat, opposite, validate_category
from cocart.core.exceptions import InternalContradiction, NotCertified, NotInverting
from cocart.core.functor import (
    FunctorData,
    compose_functors,
    constant_functor,
    dual_functor,
    enumerate_functors,
    identity_functor,
    is_bijective,
)
from cocart.core.isomorphism import find_isomorphism
from cocart.core.marking import Marking, saturate_marking
from cocart.core.natural import find_natural_isomorphism
from cocart.core.sampling import (
    random_category,
    random_functor,
    random_galois_connection,
    random_marking,
    random_poset,
)
from cocart.derived.adjunction import adjunction_isomorphism, check_adjunction, derive_adjoint_pair
from cocart.derived.functors import (
    derive_preserving,
    fiber_comparison,
    left_derived,
    localized_chain,
    right_derived,
)
from cocart.derived.models import DerivedStatus
from cocart.fibrations.cocartesian import check_cartesian, check_cocartesian, classify_cocartesian
from cocart.fibrations.grothendieck import grothendieck_cart, grothendieck_cocart
from cocart.localization.engine import induced_functor, localize
from cocart.localization.fractions import check_right_fractions

Randoms = st.randoms(use_true_random=False)

PROPERTY_SETTINGS = settings(
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture],
)

ROUND_TRIP_SETTINGS = settings(PROPERTY_SETTINGS, max_examples=200)

PIPELINE_SETTINGS = settings(PROPERTY_SETTINGS, max_examples=60)


def _categories(rng: random.Random) -> FinCat:
    return random_category(rng, max_morphisms=8)


class TestCategoryProperties:
    """Properties of sampled categories."""

    @PROPERTY_SETTINGS
    @given(Randoms)
    def test_sampled_categories_are_valid(self, rng: random.Random) -> None:
        """Test every sampler produces a valid composition table."""
        assert validate_category(_categories(rng)).ok

    @PROPERTY_SETTINGS
    @given(Randoms)
    def test_opposite_involution(self, rng: random.Random) -> None:
        """Test opposite is an involution on the nose."""
        C = _categories(rng)
        assert opposite(opposite(C)) == C

    @PROPERTY_SETTINGS
    @given(Randoms)
    def test_saturation_idempotent(self, rng: random.Random) -> None:
        """Test saturating a saturated marking changes nothing."""
        C = _categories(rng)
        W = random_marking(rng, C)
        assert saturate_marking(C, W.members) == W

    @PROPERTY_SETTINGS
    @given(Randoms)
    def test_dual_functor_involution(self, rng: random.Random) -> None:
        """Test dualizing a functor twice gives it back."""
        C, D = _categories(rng), _categories(rng)
        f = random_functor(rng, C, D)
        assert dual_functor(dual_functor(f)) == f


class TestGrothendieckProperties:
    """Properties of E_f and F_f."""

    @pytest.mark.slow
    @ROUND_TRIP_SETTINGS
    @given(Randoms)
    def test_classification_round_trip(self, rng: random.Random) -> None:
        """Test E_f is cocartesian and classifies a functor isomorphic to f."""
        C, D = random_category(rng, max_morphisms=10), random_category(rng, max_morphisms=10)
        f = random_functor(rng, C, D)
        X = grothendieck_cocart(f)
        assert validate_category(X.total).ok
        witness = check_cocartesian(X)
        assert witness is not None
        assert find_natural_isomorphism(classify_cocartesian(X, witness), f) is not None

    @PROPERTY_SETTINGS
    @given(Randoms)
    def test_cartesian_construction(self, rng: random.Random) -> None:
        """Test F_f is a valid cartesian fibration."""
        C, D = random_poset(rng), random_poset(rng)
        f = random_functor(rng, C, D)
        X = grothendieck_cart(f)
        assert validate_category(X.total).ok
        assert check_cartesian(X) is not None


class TestLocalizationProperties:
    """Properties of certified localizations."""

    @PROPERTY_SETTINGS
    @given(Randoms)
    def test_q_inverts_marking(self, rng: random.Random) -> None:
        """Test q sends every marked morphism to an isomorphism."""
        C = random_poset(rng)
        W = random_marking(rng, C)
        L = localize(C, W, depth=4)
        if L.certified:
            assert L.q is not None
            assert W.inverts(L.q)

    @PROPERTY_SETTINGS
    @given(Randoms)
    def test_q_factors_through_itself(self, rng: random.Random) -> None:
        """Test the map induced by q is the identity of the localization."""
        C = random_poset(rng)
        W = random_marking(rng, C)
        L = localize(C, W, depth=4)
        if L.certified:
            assert L.q is not None and L.localized is not None
            assert induced_functor(L, L.q) == identity_functor(L.localized)

    @PROPERTY_SETTINGS
    @given(Randoms)
    def test_engines_agree(self, rng: random.Random) -> None:
        """Test a converged zig-zag result matches the fraction result."""
        C = random_poset(rng, max_objects=3)
        W = random_marking(rng, C)
        if not check_right_fractions(C, W).ok:
            return
        by_fractions = localize(C, W, method="fractions")
        by_zigzag = localize(C, W, method="zigzag", depth=4)
        if by_zigzag.certified:
            assert by_fractions.localized is not None and by_zigzag.localized is not None
            assert find_isomorphism(by_fractions.localized, by_zigzag.localized, fix_objects=True) is not None


class TestAdjunctionProperties:
    """Properties of random Galois connections."""

    @PROPERTY_SETTINGS
    @given(Randoms)
    def test_galois_connections_are_adjunctions(self, rng: random.Random) -> None:
        """Test the sampled pairs satisfy the triangle identities."""
        f, g = random_galois_connection(rng)
        assert check_adjunction(f, g) is not None

    @PROPERTY_SETTINGS
    @given(Randoms)
    def test_adjunction_identifies_constructions(self, rng: random.Random) -> None:
        """Test E_f and F_g are isomorphic over [1] for f ⊣ g."""
        f, g = random_galois_connection(rng)
        witness = check_adjunction(f, g)
        assert witness is not None
        assert is_bijective(adjunction_isomorphism(f, g, witness))


def _preserving_markings(
    rng: random.Random, f: FunctorData, g: FunctorData | None = None
) -> tuple[Marking, Marking]:
    """Random W_C and the smallest W_D with f(W_C) ⊆ W_D (and g(W_D) ⊆ W_C when g is given)."""
    C, D = f.source, f.target
    W_C = random_marking(rng, C)
    W_D = saturate_marking(D, [f.mor_map[m] for m in W_C])
    while g is not None:
        grown = saturate_marking(C, [*W_C, *(g.mor_map[m] for m in W_D)])
        if grown == W_C:
            break
        W_C = grown
        W_D = saturate_marking(D, [f.mor_map[m] for m in W_C])
    return W_C, W_D


class TestUniversalProperty:
    """The localization functor is initial among W-inverting functors."""

    @PIPELINE_SETTINGS
    @given(Randoms)
    def test_inverting_functors_factor_uniquely(self, rng: random.Random) -> None:
        """Test k∘q factors back to k and no other functor out of C′ does."""
        C = random_poset(rng)
        W = random_marking(rng, C)
        L = localize(C, W, depth=4)
        if not L.certified:
            return
        assert L.q is not None and L.localized is not None
        D = random_category(rng, max_morphisms=8)
        k = random_functor(rng, L.localized, D)
        h = compose_functors(k, L.q)
        assert W.inverts(h)
        assert induced_functor(L, h) == k
        factorizations = [
            candidate
            for candidate in enumerate_functors(
                L.localized, D, object_filter=lambda x, y: y == h.obj_map[x]
            )
            if compose_functors(candidate, L.q) == h
        ]
        assert factorizations == [k]

    @PIPELINE_SETTINGS
    @given(Randoms)
    def test_non_inverting_functor_rejected(self, rng: random.Random) -> None:
        """Test a functor that keeps a marked arrow non-invertible has no factorization."""
        C = random_poset(rng)
        W = random_marking(rng, C)
        L = localize(C, W, depth=4)
        if not L.certified or W.is_trivial():
            return
        with pytest.raises(NotInverting):
            induced_functor(L, identity_functor(C))


class TestPreservingProperties:
    """The shortcut for W-preserving functors agrees with both pipelines."""

    @PIPELINE_SETTINGS
    @given(Randoms)
    def test_preserving_agrees_with_pipelines(self, rng: random.Random) -> None:
        """Test f′ is isomorphic to 𝐋f and 𝐑f whenever those are certified."""
        C, D = random_poset(rng, max_objects=3), random_poset(rng, max_objects=3)
        f = random_functor(rng, C, D)
        W_C, W_D = _preserving_markings(rng, f)
        shortcut = derive_preserving(f, W_C, W_D, depth=4, cross_check=False)
        if shortcut.status is DerivedStatus.NOT_CERTIFIED:
            return
        assert shortcut.derived is not None
        for pipeline in (left_derived, right_derived):
            other = pipeline(f, W_C, W_D, depth=4)
            if other.status is DerivedStatus.NOT_CERTIFIED:
                continue
            assert other.exists
            assert other.derived is not None
            assert find_natural_isomorphism(other.derived, shortcut.derived) is not None


class TestDerivedGaloisProperties:
    """Galois connections with compatible markings derive to adjoint pairs."""

    @settings(PROPERTY_SETTINGS, max_examples=15)
    @given(Randoms)
    def test_galois_pairs_derive(self, rng: random.Random) -> None:
        """Test 𝐋f ⊣ 𝐑g exists and matches the factorizations of f and g."""
        f, g = random_galois_connection(rng)
        W_C, W_D = _preserving_markings(rng, f, g)
        try:
            pair = derive_adjoint_pair(f, g, W_C, W_D, depth=4)
        except NotCertified:
            return
        assert pair is not None
        assert check_adjunction(pair.witness.left, pair.witness.right) is not None
        shortcut = derive_preserving(f, W_C, W_D, depth=4, cross_check=False)
        assert shortcut.derived is not None
        assert find_natural_isomorphism(pair.witness.left, shortcut.derived) is not None


class TestInternalContradiction:
    """Cross-checks raise InternalContradiction on planted inconsistencies."""

    def test_tampered_localization_functor(self, arrow: FinCat, arrow_isos: Marking) -> None:
        """Test a localization whose q was replaced no longer factors its own functors."""
        L = localize(arrow, arrow_isos)
        assert L.localized is not None
        tampered = dataclasses.replace(L, q=constant_functor(arrow, L.localized, 0))
        with pytest.raises(InternalContradiction):
            induced_functor(tampered, identity_functor(arrow))

    def test_fiber_against_wrong_localization(
        self, arrow_identity: FunctorData, arrow_marked: Marking, arrow_isos: Marking
    ) -> None:
        """Test fiber 0 of E′_f is not the localization at a smaller marking."""
        X, Xp = localized_chain([arrow_identity], [arrow_marked, arrow_isos])
        with pytest.raises(InternalContradiction):
            fiber_comparison(X, Xp, 0, localize(arrow_identity.source, arrow_isos))
