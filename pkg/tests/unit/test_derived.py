"""Tests for left and right derived functors and the resolution criterion."""

from __future__ import annotations

import pytest

from cocart.core.category import FinCat, chain, preorder
from cocart.core.exceptions import BulletFailed, DerivedMissing, NotCertified, NotPreserving
from cocart.core.functor import FunctorData, identity_functor, inclusion_functor
from cocart.core.isomorphism import isomorphic
from cocart.core.marking import Marking, all_morphisms, isos_only, marking_from_names
from cocart.core.natural import check_natural, find_natural_isomorphism
from cocart.core.presentation import Generator, Presentation, compile_presentation
from cocart.core.sampling import monotone_map
from cocart.derived.functors import derive_preserving, left_derived, right_derived
from cocart.derived.models import DerivedStatus, Side
from cocart.derived.resolution import derive_via_resolution


@pytest.fixture
def glued_cospan() -> FunctorData:
    """a → c ← b sent onto d0 → e ← d1, which has no lower bound for d0 and d1."""
    C = preorder(["a", "b", "c"], [("a", "c"), ("b", "c")], name="Cospan")
    D = preorder(["d0", "d1", "e"], [("d0", "e"), ("d1", "e")], name="Target")
    return monotone_map(C, D, [0, 1, 2]).renamed("k")


class TestLeftDerived:
    """Tests for left_derived."""

    def test_collapse_to_start(self, arrow_identity: FunctorData, arrow_marked: Marking, arrow_isos: Marking) -> None:
        """Test inverting u in the source makes 𝐋id the constant at 0."""
        result = left_derived(arrow_identity, arrow_marked, arrow_isos)
        assert result.status is DerivedStatus.EXISTS
        assert result.side is Side.LEFT
        derived = result.require()
        assert derived.obj_map == (0, 0)
        assert derived.name == "Lf"
        assert result.theta is not None
        assert check_natural(result.theta) == []

    def test_isos_only_recovers_functor(self, galois: tuple[FunctorData, FunctorData]) -> None:
        """Test 𝐋f agrees with f when only isomorphisms are marked."""
        f, _ = galois
        result = left_derived(f, isos_only(f.source), isos_only(f.target))
        derived = result.require()
        assert derived.obj_map == f.obj_map
        assert isomorphic(derived.source, f.source)

    def test_galois_left_adjoint(self, galois: tuple[FunctorData, FunctorData]) -> None:
        """Test inverting 1 → 2 sends every object of [2]′ to 0."""
        f, _ = galois
        W = marking_from_names(f.source, ["1->2"])
        result = left_derived(f, W, isos_only(f.target))
        assert result.exists
        assert result.require().obj_map == (0, 0, 0)
        assert result.q_C is not None and result.q_D is not None

    def test_fails_cocartesian(self, glued_cospan: FunctorData) -> None:
        """Test gluing d0 and d1 under a common source leaves no cocartesian lift."""
        k = glued_cospan
        result = left_derived(k, all_morphisms(k.source), isos_only(k.target))
        assert result.status is DerivedStatus.FAILS_COCARTESIAN
        assert result.obstruction is not None
        assert result.obstruction.startswith("no cocartesian lift out of")
        assert result.to_dict()["status"] == "fails_cocartesian"
        with pytest.raises(DerivedMissing):
            result.require()

    def test_to_dict(self, arrow_identity: FunctorData, arrow_marked: Marking, arrow_isos: Marking) -> None:
        """Test the report carries the derived functor and θ."""
        data = left_derived(arrow_identity, arrow_marked, arrow_isos).to_dict()
        assert data["status"] == "exists"
        assert data["side"] == "left"
        assert "theta" in data
        assert "derived" in data


class TestRightDerived:
    """Tests for right_derived."""

    def test_collapse_to_end(self, arrow_identity: FunctorData, arrow_marked: Marking, arrow_isos: Marking) -> None:
        """Test inverting u in the source makes 𝐑id the constant at 1."""
        result = right_derived(arrow_identity, arrow_marked, arrow_isos)
        assert result.side is Side.RIGHT
        derived = result.require()
        assert derived.obj_map == (1, 1)
        assert derived.name == "Rf"
        assert result.theta is not None
        assert check_natural(result.theta) == []

    def test_isos_only_recovers_functor(self, galois: tuple[FunctorData, FunctorData]) -> None:
        """Test 𝐑g agrees with g when only isomorphisms are marked."""
        _, g = galois
        result = right_derived(g, isos_only(g.source), isos_only(g.target))
        assert result.require().obj_map == g.obj_map

    def test_not_certified(self) -> None:
        """Test a diverging localization is reported, not raised."""
        pres = Presentation("Par", ("x", "y"), (Generator("s", "x", "y"), Generator("t", "x", "y")))
        P = compile_presentation(pres, 10)
        f = identity_functor(P)
        result = right_derived(f, marking_from_names(P, ["s"]), isos_only(P), method="zigzag", depth=4)
        assert result.status is DerivedStatus.NOT_CERTIFIED
        with pytest.raises(NotCertified):
            result.require()


class TestDerivePreserving:
    """Tests for derive_preserving."""

    def test_preserving_marking(self, galois: tuple[FunctorData, FunctorData]) -> None:
        """Test f carries 0 → 1 to an identity, so f′ exists and both pipelines agree."""
        f, _ = galois
        W = marking_from_names(f.source, ["0->1"])
        result = derive_preserving(f, W, isos_only(f.target))
        assert result.method == "preserving"
        derived = result.require()
        assert derived.name == "f'"
        assert derived.obj_map == (0, 0, 1)

    def test_not_preserving(self, galois: tuple[FunctorData, FunctorData]) -> None:
        """Test f sends 1 → 2 to u, which is not marked in [1]."""
        f, _ = galois
        W = marking_from_names(f.source, ["1->2"])
        with pytest.raises(NotPreserving):
            derive_preserving(f, W, isos_only(f.target))


class TestDeriveViaResolution:
    """Tests for the resolution criterion."""

    def test_start_object_resolves(self, arrow_identity: FunctorData, arrow_marked: Marking, arrow_isos: Marking) -> None:
        """Test {0} ⊂ [1] resolves id_[1] when u is inverted."""
        i = inclusion_functor(arrow_identity.source, [0])
        result = derive_via_resolution(arrow_identity, i, arrow_marked, arrow_isos)
        assert result.exists
        assert result.require().obj_map == (0, 0)

    def test_not_essentially_surjective(self, galois: tuple[FunctorData, FunctorData]) -> None:
        """Test {0} does not reach the class of 2 after inverting 1 → 2."""
        f, _ = galois
        i = inclusion_functor(f.source, [0])
        W = marking_from_names(f.source, ["1->2"])
        with pytest.raises(BulletFailed) as exc_info:
            derive_via_resolution(f, i, W, isos_only(f.target))
        assert exc_info.value.bullet == 2

    def test_wrong_target(self, galois: tuple[FunctorData, FunctorData]) -> None:
        """Test a resolution must land in the source of f."""
        f, _ = galois
        i = inclusion_functor(chain(3), [0])
        with pytest.raises(BulletFailed) as exc_info:
            derive_via_resolution(f, i, isos_only(f.source), isos_only(f.target))
        assert exc_info.value.bullet == 1


def test_derived_of_identity_is_identity(chain2: FinCat) -> None:
    """Test 𝐋id and 𝐑id are identities for any marking with fractions."""
    W = marking_from_names(chain2, ["0->1"])
    f = identity_functor(chain2)
    for pipeline in (left_derived, right_derived):
        result = pipeline(f, W, W)
        assert result.source_localization is not None
        localized = result.source_localization.localized
        assert localized is not None
        assert find_natural_isomorphism(result.require(), identity_functor(localized)) is not None
