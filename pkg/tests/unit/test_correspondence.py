"""Tests for correspondences, Grothendieck constructions and fibration checks."""

from __future__ import annotations

import pytest

from cocart.core.category import FinCat, chain, discrete, preorder, product, terminal
from cocart.core.exceptions import BadBase, BadDegrees, IllFormed, NotCocartesian, UnknownMorphism
from cocart.core.functor import (
    FunctorData,
    compose_functors,
    constant_functor,
    identity_functor,
)
from cocart.core.isomorphism import find_isomorphism, isomorphic
from cocart.core.natural import find_natural_isomorphism
from cocart.fibrations.bifibration import check_bifibration, check_lax_bifibration
from cocart.fibrations.cocartesian import (
    check_cartesian,
    check_cocartesian,
    classification_invariance,
    classify_cartesian,
    classify_cocartesian,
    cocartesian_obstruction,
    is_cartesian_arrow,
    is_cocartesian_arrow,
)
from cocart.fibrations.composition import (
    check_flat_over_triangle,
    compose_correspondences,
    flatness_defects,
)
from cocart.fibrations.correspondence import Correspondence, delta1, product_correspondence
from cocart.fibrations.grothendieck import (
    grothendieck_cart,
    grothendieck_chain,
    grothendieck_cocart,
    grothendieck_cross,
)
from cocart.fibrations.sections import sections_category


class TestGrothendieckCocart:
    """Tests for E_f."""

    def test_identity_of_arrow(self, arrow_identity: FunctorData) -> None:
        """Test E_{id_[1]} has the four-case hom table."""
        X = grothendieck_cocart(arrow_identity)
        T = X.total
        c0, c1 = X.objects_of_degree(0)
        d0, d1 = X.objects_of_degree(1)
        assert T.objects == ("0:0", "0:1", "1:0", "1:1")
        assert len(T.hom(c0, d1)) == 1
        assert len(T.hom(c0, d0)) == 1
        assert len(T.hom(c1, d0)) == 0
        assert T.hom(d0, c1) == ()
        assert T.n_morphisms == 9

    def test_point_to_point(self, point: FinCat) -> None:
        """Test E of T → T is the walking arrow."""
        X = grothendieck_cocart(identity_functor(point))
        assert isomorphic(X.total, chain(1))

    def test_arrow_to_point(self, arrow: FinCat, point: FinCat) -> None:
        """Test E of [1] → T has three objects and six morphisms."""
        X = grothendieck_cocart(constant_functor(arrow, point, 0))
        assert X.total.n_objects == 3
        assert X.total.n_morphisms == 6

    def test_fibers_are_recorded(self, galois: tuple[FunctorData, FunctorData]) -> None:
        """Test the fibers are the source and target of f."""
        f, _ = galois
        X = grothendieck_cocart(f)
        assert X.fiber(0) == f.source
        assert X.fiber(1) == f.target
        with pytest.raises(BadBase):
            X.fiber(2)

    def test_cross_lookup(self, arrow_identity: FunctorData) -> None:
        """Test cross morphisms are addressed by (i, x, j, β)."""
        X = grothendieck_cocart(arrow_identity)
        m = grothendieck_cross(X, 0, 0, 1, 2)
        assert X.total.names[m] == "<0:0,1:0->1>"
        with pytest.raises(UnknownMorphism):
            grothendieck_cross(X, 0, 1, 1, 2)

    def test_degree_must_not_decrease(self, arrow: FinCat) -> None:
        """Test a correspondence rejects degree-decreasing morphisms."""
        with pytest.raises(IllFormed, match="decreases degree"):
            Correspondence(arrow, 1, (1, 0))


class TestGrothendieckCart:
    """Tests for F_f."""

    def test_identity_of_arrow(self, arrow_identity: FunctorData) -> None:
        """Test F_{id_[1]} has Hom(d0, c1) = Hom(0, 1)."""
        X = grothendieck_cart(arrow_identity)
        d0, _ = X.objects_of_degree(0)
        _, c1 = X.objects_of_degree(1)
        assert len(X.total.hom(d0, c1)) == 1
        assert X.total.hom(c1, d0) == ()
        assert X.total.name == "F_f"

    def test_point_to_point(self, point: FinCat) -> None:
        """Test F of T → T is the walking arrow."""
        assert isomorphic(grothendieck_cart(identity_functor(point)).total, chain(1))

    def test_is_cartesian(self, galois: tuple[FunctorData, FunctorData]) -> None:
        """Test F_g is a cartesian fibration classified by g."""
        _, g = galois
        X = grothendieck_cart(g)
        assert check_cartesian(X) is not None
        G = classify_cartesian(X)
        assert find_natural_isomorphism(G, g) is not None


class TestCocartesian:
    """Tests for cocartesian arrows, witnesses and classification."""

    def test_identity_lifts_are_cocartesian(self, galois: tuple[FunctorData, FunctorData]) -> None:
        """Test <x, id_{f(x)}> is cocartesian in E_f."""
        f, _ = galois
        X = grothendieck_cocart(f)
        for x in range(f.source.n_objects):
            m = X.cross_index[(0, x, 1, f.target.identity[f.obj_map[x]])]
            assert is_cocartesian_arrow(X, m)

    def test_projection_lifts(self, chain2: FinCat) -> None:
        """Test C×[1] → [1] is cocartesian and classifies the identity."""
        X = product_correspondence(chain2)
        w = check_cocartesian(X)
        assert w is not None
        F = classify_cocartesian(X, w)
        assert find_natural_isomorphism(F, identity_functor(chain2)) is not None

    def test_bad_degrees(self, arrow_identity: FunctorData) -> None:
        """Test a fiber morphism cannot be tested for cocartesianness."""
        X = grothendieck_cocart(arrow_identity)
        with pytest.raises(BadDegrees):
            is_cocartesian_arrow(X, 0)

    def test_empty_cross_homs(self) -> None:
        """Test T to T with no cross arrow has no witness."""
        X = Correspondence(discrete(["c", "d"]), 1, (0, 1))
        assert check_cocartesian(X) is None
        assert cocartesian_obstruction(X) == 0
        with pytest.raises(NotCocartesian):
            classify_cocartesian(X)

    def test_no_couniversal_arrow(self) -> None:
        """Test two competing arrows into a discrete fiber are both non-cocartesian."""
        P = preorder(["c", "d0", "d1"], [("c", "d0"), ("c", "d1")])
        X = Correspondence(P, 1, (0, 1, 1))
        assert not is_cocartesian_arrow(X, P.mor("c->d0"))
        assert check_cocartesian(X) is None

    def test_round_trip(self, galois: tuple[FunctorData, FunctorData]) -> None:
        """Test classify(E_f) is naturally isomorphic to f."""
        for f in galois:
            F = classify_cocartesian(grothendieck_cocart(f))
            assert find_natural_isomorphism(F, f) is not None

    def test_constant_round_trip(self, chain2: FinCat, arrow: FinCat) -> None:
        """Test a constant functor classifies to a constant functor."""
        c = constant_functor(chain2, arrow, 1)
        F = classify_cocartesian(grothendieck_cocart(c))
        assert F.obj_map == (1, 1, 1)

    def test_classification_invariance(self, groupoid: FinCat, arrow: FinCat) -> None:
        """Test least and greatest lifts classify isomorphic functors."""
        X = grothendieck_cocart(constant_functor(arrow, groupoid, 0))
        isos = classification_invariance(X)
        assert len(isos) == 1

    def test_cartesian_arrow_in_cocart(self, arrow_identity: FunctorData) -> None:
        """Test E_{id} is also a cartesian fibration."""
        X = grothendieck_cocart(arrow_identity)
        assert check_cartesian(X) is not None
        m = X.cross_index[(0, 1, 1, 1)]
        assert is_cartesian_arrow(X, m)


class TestSections:
    """Tests for sections_category."""

    def test_projection(self, point: FinCat) -> None:
        """Test T×[1] has a single section."""
        S = sections_category(product_correspondence(point))
        assert S.n_objects == 1

    def test_identity_of_arrow(self, arrow_identity: FunctorData) -> None:
        """Test E_{id_[1]} has three sections."""
        S = sections_category(grothendieck_cocart(arrow_identity))
        assert S.n_objects == 3

    def test_point_into_discrete(self, point: FinCat) -> None:
        """Test only c → d0 is a section when f(*) = d0."""
        D = discrete(["d0", "d1"])
        S = sections_category(grothendieck_cocart(constant_functor(point, D, 0)))
        assert isomorphic(S, terminal())

    def test_not_cocartesian(self) -> None:
        """Test sections require a cocartesian fibration."""
        with pytest.raises(NotCocartesian):
            sections_category(Correspondence(discrete(["c", "d"]), 1, (0, 1)))


class TestBifibration:
    """Tests for lax bifibrations and bifibrations."""

    def test_identity_of_product(self, arrow: FinCat, chain2: FinCat) -> None:
        """Test id: B×C → B×C is a bifibration."""
        p = identity_functor(product(arrow, chain2))
        assert check_lax_bifibration(p, arrow, chain2)
        assert check_bifibration(p, arrow, chain2)

    def test_missing_lift(self, point: FinCat, arrow: FinCat) -> None:
        """Test a functor with no lift of the arrow of [1] is not lax."""
        p = FunctorData(discrete(["a", "b"]), product(point, arrow), (0, 1), (0, 1))
        assert not check_lax_bifibration(p, point, arrow)
        assert not check_bifibration(p, point, arrow)


class TestComposition:
    """Tests for composition of correspondences and flatness."""

    def test_composite_is_grothendieck_of_composite(
        self, galois: tuple[FunctorData, FunctorData]
    ) -> None:
        """Test E_g∘E_f ≅ E_{g∘f} fixing objects."""
        f, g = galois
        composite = compose_correspondences(grothendieck_cocart(f), grothendieck_cocart(g))
        expected = grothendieck_cocart(compose_functors(g, f))
        assert composite.degree == expected.degree
        assert find_isomorphism(composite.total, expected.total, fix_objects=True) is not None

    def test_chain_is_flat(self, galois: tuple[FunctorData, FunctorData]) -> None:
        """Test the [2]-construction of a composable pair is flat."""
        f, g = galois
        X = grothendieck_chain([f, g])
        assert X.base_length == 2
        assert check_flat_over_triangle(X)

    def test_planted_defect(self) -> None:
        """Test an arrow x → z not factoring through level 1 breaks flatness."""
        P = preorder(["x", "y", "z"], [("x", "z"), ("y", "z")])
        X = Correspondence(P, 2, (0, 1, 2))
        assert flatness_defects(X) == [(0, 2)]
        assert not check_flat_over_triangle(X)

    def test_flatness_needs_triangle(self, arrow_identity: FunctorData) -> None:
        """Test flatness is only defined over [2]."""
        with pytest.raises(BadBase):
            check_flat_over_triangle(grothendieck_cocart(arrow_identity))

    def test_delta1(self, galois: tuple[FunctorData, FunctorData]) -> None:
        """Test δ¹ of E[f, g] keeps the outer fibers."""
        f, g = galois
        outer = delta1(grothendieck_chain([f, g]))
        assert outer.base_length == 1
        assert outer.fiber(0) == f.source
        assert outer.fiber(1) == g.target
        assert check_cocartesian(outer) is not None
