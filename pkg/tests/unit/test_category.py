"""Tests for finite categories, presentations and standard constructions."""

from __future__ import annotations

import pytest

from cocart.core.category import (
    FinCat,
    ViolationKind,
    arrow_category,
    chain,
    discrete,
    full_subcategory,
    is_isomorphism,
    opposite,
    product,
    product_with_chain,
    terminal,
    validate_category,
)
from cocart.core.exceptions import BudgetExceeded, IllFormed, NotComposable, UnknownMorphism
from cocart.core.isomorphism import find_isomorphism, isomorphic
from cocart.core.presentation import Generator, Presentation, Relation, compile_presentation, node_cap
from cocart.core.sampling import idempotent_monoid


class TestFinCat:
    """Tests for FinCat lookups and composition."""

    def test_chain_shape(self, arrow: FinCat) -> None:
        """Test [1] has two objects and three morphisms."""
        assert arrow.objects == ("0", "1")
        assert arrow.names == ("id_0", "id_1", "0->1")
        assert arrow.hom(0, 1) == (2,)
        assert arrow.hom(1, 0) == ()

    def test_compose_with_identity(self, arrow: FinCat) -> None:
        """Test identities are units."""
        u = arrow.mor("0->1")
        assert arrow.compose(u, arrow.identity[0]) == u
        assert arrow.compose(arrow.identity[1], u) == u

    def test_compose_not_composable(self, arrow: FinCat) -> None:
        """Test composing in the wrong order is rejected."""
        u = arrow.mor("0->1")
        with pytest.raises(NotComposable):
            arrow.compose(u, u)

    def test_unknown_names(self, arrow: FinCat) -> None:
        """Test lookups of missing names raise."""
        with pytest.raises(UnknownMorphism):
            arrow.mor("v")
        with pytest.raises(UnknownMorphism):
            arrow.check_morphism(7)
        with pytest.raises(IllFormed):
            arrow.obj("2")

    def test_compose_path(self, chain2: FinCat) -> None:
        """Test paths compose in application order."""
        a, b = chain2.mor("0->1"), chain2.mor("1->2")
        assert chain2.compose_path([a, b]) == chain2.mor("0->2")

    def test_to_dict_lists_composites(self, chain2: FinCat) -> None:
        """Test the dictionary form records non-trivial composites."""
        data = chain2.to_dict()
        assert data["name"] == "[2]"
        assert ["1->2", "0->1", "0->2"] in data["composition"]


class TestValidateCategory:
    """Tests for validate_category."""

    def test_valid_chain(self, arrow: FinCat) -> None:
        """Test [1] passes validation."""
        assert validate_category(arrow).ok

    def test_planted_unit_violation(self, arrow: FinCat) -> None:
        """Test a wrong u∘id_0 is reported as a unit violation."""
        comp = dict(arrow.comp)
        comp[(2, 0)] = 0
        broken = FinCat(arrow.objects, arrow.names, arrow.src, arrow.tgt, arrow.identity, comp)
        report = validate_category(broken)
        assert not report.ok
        assert [v.morphisms for v in report.of_kind(ViolationKind.UNIT)] == [("0->1", "id_0")]

    def test_planted_totality_violation(self) -> None:
        """Test a missing composite of a composable pair is reported."""
        C = idempotent_monoid()
        comp = dict(C.comp)
        del comp[(1, 1)]
        broken = FinCat(C.objects, C.names, C.src, C.tgt, C.identity, comp)
        report = validate_category(broken)
        assert [v.morphisms for v in report.of_kind(ViolationKind.TOTALITY)] == [("e", "e")]
        assert report.to_dict()["ok"] is False


class TestConstructions:
    """Tests for opposite, products and subcategories."""

    def test_opposite_involutive(self, chain2: FinCat) -> None:
        """Test opposite(opposite(C)) is C on the nose."""
        double = opposite(opposite(chain2))
        assert double == chain2
        assert double.name == chain2.name

    def test_opposite_chain_isomorphic(self, arrow: FinCat) -> None:
        """Test [1]^op is isomorphic to [1]."""
        assert isomorphic(opposite(arrow), arrow)

    def test_opposite_monoid(self) -> None:
        """Test the idempotent monoid is its own opposite."""
        C = idempotent_monoid()
        assert opposite(C) == C

    def test_product_with_zero(self, chain2: FinCat) -> None:
        """Test C×[0] is isomorphic to C."""
        assert isomorphic(product_with_chain(chain2, 0), chain2)

    def test_square(self, arrow: FinCat) -> None:
        """Test [1]×[1] has 4 objects and 9 morphisms."""
        square = product_with_chain(arrow, 1)
        assert square.n_objects == 4
        assert square.n_morphisms == 9
        assert validate_category(square).ok

    def test_terminal_times_arrow(self, arrow: FinCat) -> None:
        """Test T×[1] is isomorphic to [1]."""
        assert isomorphic(product(terminal(), arrow), arrow)

    def test_full_subcategory(self, chain2: FinCat) -> None:
        """Test the full subcategory on 0 and 2 keeps the composite."""
        sub = full_subcategory(chain2, [0, 2])
        assert sub.objects == ("0", "2")
        assert sub.names == ("id_0", "id_2", "0->2")

    def test_arrow_category(self, arrow: FinCat) -> None:
        """Test [1]^[1] has one object per morphism of [1] and is valid."""
        A = arrow_category(arrow)
        assert A.n_objects == 3
        assert validate_category(A).ok

    def test_discrete_isos(self) -> None:
        """Test only identities are isomorphisms in a discrete category."""
        D = discrete(["a", "b"])
        assert D.n_morphisms == 2
        assert all(is_isomorphism(D, m) for m in range(2))


class TestIsomorphisms:
    """Tests for is_isomorphism and find_isomorphism."""

    def test_identity_is_iso(self, arrow: FinCat) -> None:
        """Test every identity is invertible."""
        assert is_isomorphism(arrow, arrow.identity[0])

    def test_arrow_is_not_iso(self, arrow: FinCat) -> None:
        """Test the arrow of [1] has no inverse."""
        assert not is_isomorphism(arrow, arrow.mor("0->1"))

    def test_groupoid_arrows_are_isos(self, groupoid: FinCat) -> None:
        """Test both arrows of the indiscrete groupoid are invertible."""
        assert is_isomorphism(groupoid, groupoid.mor("a->b"))
        assert is_isomorphism(groupoid, groupoid.mor("b->a"))

    def test_unknown_morphism(self, arrow: FinCat) -> None:
        """Test is_isomorphism rejects unknown indices."""
        with pytest.raises(UnknownMorphism):
            is_isomorphism(arrow, 5)

    def test_find_isomorphism_sizes_differ(self, arrow: FinCat, chain2: FinCat) -> None:
        """Test tables of different sizes are never isomorphic."""
        assert find_isomorphism(arrow, chain2) is None


class TestCompilePresentation:
    """Tests for compile_presentation."""

    def test_free_arrow(self) -> None:
        """Test one arrow without relations gives three morphisms."""
        pres = Presentation("A", ("a", "b"), (Generator("u", "a", "b"),))
        C = compile_presentation(pres, 10)
        assert C.names == ("id_a", "id_b", "u")
        assert validate_category(C).ok

    def test_idempotent(self) -> None:
        """Test e∘e = e gives a two-element monoid."""
        C = idempotent_monoid()
        assert C.n_morphisms == 2
        e = C.mor("e")
        assert C.compose(e, e) == e

    def test_free_monoid_exceeds_budget(self) -> None:
        """Test the free monoid on one generator does not close."""
        pres = Presentation("M", ("x",), (Generator("s", "x", "x"),))
        with pytest.raises(BudgetExceeded) as exc_info:
            compile_presentation(pres, 10)
        assert exc_info.value.budget == 10
        assert "M" in str(exc_info.value)

    def test_commutative_square(self) -> None:
        """Test a commuting relation identifies the two diagonals."""
        pres = Presentation(
            "Sq",
            ("p", "q", "r", "s"),
            (
                Generator("x", "p", "q"),
                Generator("y", "p", "r"),
                Generator("z", "q", "s"),
                Generator("w", "r", "s"),
            ),
            (Relation(("z", "x"), ("w", "y")),),
        )
        C = compile_presentation(pres, 20)
        assert C.n_morphisms == 9
        assert C.compose(C.mor("z"), C.mor("x")) == C.compose(C.mor("w"), C.mor("y"))

    def test_dangling_endpoint(self) -> None:
        """Test an arrow into an undeclared object is rejected."""
        pres = Presentation("A", ("a",), (Generator("u", "a", "b"),))
        with pytest.raises(IllFormed):
            compile_presentation(pres, 10)

    def test_non_parallel_relation(self) -> None:
        """Test relations between non-parallel words are rejected."""
        pres = Presentation(
            "A",
            ("a", "b"),
            (Generator("u", "a", "b"), Generator("v", "b", "a")),
            (Relation(("u",), ("v",)),),
        )
        with pytest.raises(IllFormed, match="not parallel"):
            compile_presentation(pres, 10)

    def test_generator_order_irrelevant(self) -> None:
        """Test reordering generators yields an isomorphic category."""
        gens = (Generator("u", "a", "b"), Generator("v", "b", "c"))
        first = compile_presentation(Presentation("A", ("a", "b", "c"), gens), 10)
        second = compile_presentation(Presentation("A", ("a", "b", "c"), gens[::-1]), 10)
        assert isomorphic(first, second)

    def test_invertible_pair(self) -> None:
        """Test an explicitly inverted pair compiles to the groupoid."""
        pres = Presentation(
            "G",
            ("a", "b"),
            (Generator("s", "a", "b"), Generator("r", "b", "a")),
            (Relation(("r", "s"), ("id_a",)), Relation(("s", "r"), ("id_b",))),
        )
        C = compile_presentation(pres, 10)
        assert C.n_morphisms == 4
        assert is_isomorphism(C, C.mor("s"))
        assert isomorphic(C, chain(1)) is False

    def test_transient_node_cap(self) -> None:
        """Test the node cap is a parameter and is named when enumeration outgrows it."""
        pres = Presentation(
            "G",
            ("a", "b"),
            (Generator("s", "a", "b"), Generator("r", "b", "a")),
            (Relation(("r", "s"), ("id_a",)), Relation(("s", "r"), ("id_b",))),
        )
        assert node_cap(10) == 144
        with pytest.raises(BudgetExceeded, match="4 transient nodes") as exc_info:
            compile_presentation(pres, 10, max_nodes=4)
        assert exc_info.value.budget == 10
        assert compile_presentation(pres, 10, max_nodes=6).n_morphisms == 4
        with pytest.raises(IllFormed):
            compile_presentation(pres, 10, max_nodes=0)
