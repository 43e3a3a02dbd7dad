"""Tests for resolving workspace sources into categories, markings and functors."""

from __future__ import annotations

from pathlib import Path

import pytest

from cocart.cli.workspace import load_workspace, parse_workspace
from cocart.config import Settings
from cocart.core.exceptions import DSLSyntaxError, WorkspaceError
from cocart.core.functor import check_functor

ARROW = """
category I { objects: 0, 1; arrows: u: 0 -> 1; }
marking U in I { u }
functor f : I -> I { obj 0 -> 0; obj 1 -> 1; arr u -> u; }
"""


class TestParseWorkspace:
    """Tests for parse_workspace."""

    def test_arrow(self) -> None:
        """Test the walking arrow with its marking and identity functor."""
        ws = parse_workspace(ARROW)
        I = ws.category("I")
        assert I.names == ("id_0", "id_1", "u")
        assert ws.marking("U").members == frozenset({0, 1, 2})
        f = ws.functor("f")
        assert f.name == "f"
        assert check_functor(f) == []
        assert ws.summary() == {"categories": ["I"], "markings": ["U"], "functors": ["f"], "families": []}

    def test_composite_images(self) -> None:
        """Test an arrow may be sent to a composite word."""
        ws = parse_workspace(
            "category P { objects: 0, 1, 2; arrows: a: 0 -> 1, b: 1 -> 2; }\n"
            "category I { objects: 0, 1; arrows: u: 0 -> 1; }\n"
            "functor h : I -> P { obj 0 -> 0; obj 1 -> 2; arr u -> b.a; }\n"
        )
        P = ws.category("P")
        h = ws.functor("h")
        assert P.names[h.mor_map[2]] == "b.a"

    def test_multiple_sources(self) -> None:
        """Test later sources see names declared by earlier ones."""
        ws = parse_workspace([ARROW, "marking Iso in I { }"])
        assert ws.marking("Iso").is_trivial()

    def test_source_text_round_trip(self) -> None:
        """Test the canonical source parses to the same workspace."""
        ws = parse_workspace(ARROW)
        again = parse_workspace(ws.to_source())
        assert again.category("I") == ws.category("I")
        assert again.functor("f") == ws.functor("f")

    def test_unknown_lookup(self) -> None:
        """Test lookups of undeclared names name the construct."""
        ws = parse_workspace(ARROW)
        with pytest.raises(WorkspaceError) as exc_info:
            ws.functor("g")
        assert exc_info.value.construct == "g"


class TestWorkspaceErrors:
    """Tests for semantic errors."""

    def test_duplicate(self) -> None:
        """Test a name may only be declared once per kind."""
        with pytest.raises(WorkspaceError, match="duplicate category 'I'"):
            parse_workspace([ARROW, "category I { objects: x; }"])

    def test_not_a_functor(self, workspaces_dir: Path) -> None:
        """Test an arrow sent to a morphism with the wrong source is rejected."""
        with pytest.raises(WorkspaceError, match="not a functor: src mismatch at u") as exc_info:
            load_workspace([workspaces_dir / "bad_functor.cat"])
        assert exc_info.value.construct == "F"

    def test_budget(self, workspaces_dir: Path) -> None:
        """Test a presentation that does not close reports the budget."""
        with pytest.raises(WorkspaceError, match="budget exceeded in M"):
            load_workspace([workspaces_dir / "free.cat"], Settings(budget=50))

    def test_node_cap_from_settings(self, workspaces_dir: Path) -> None:
        """Test max_nodes reaches the compiler and names the category that outgrew it."""
        with pytest.raises(WorkspaceError, match="4 transient nodes") as exc_info:
            load_workspace([workspaces_dir / "arrow.cat"], Settings(max_nodes=4))
        assert exc_info.value.construct == "G"

    def test_unknown_category(self) -> None:
        """Test a functor between undeclared categories is rejected."""
        with pytest.raises(WorkspaceError, match="unknown category 'X'"):
            parse_workspace("functor f : X -> X { }")

    def test_unknown_marked_arrow(self) -> None:
        """Test a marking naming a missing arrow is rejected."""
        with pytest.raises(WorkspaceError):
            parse_workspace([ARROW, "marking V in I { v }"])

    def test_syntax_error_passes_through(self) -> None:
        """Test syntax errors keep their position."""
        with pytest.raises(DSLSyntaxError):
            parse_workspace("category {")


class TestExampleWorkspaces:
    """Tests for the bundled example workspaces."""

    def test_galois(self, workspaces_dir: Path) -> None:
        """Test galois.cat declares the connection f ⊣ g."""
        ws = load_workspace([workspaces_dir / "galois.cat"])
        assert ws.functor("f").obj_map == (0, 0, 1)
        assert ws.functor("g").obj_map == (1, 2)

    def test_square_family(self, workspaces_dir: Path) -> None:
        """Test the square family has one functor per base morphism."""
        ws = load_workspace([workspaces_dir / "square.cat"])
        entry = ws.family("Q")
        assert len(entry.family.maps) == ws.category("Sq").n_morphisms
        assert entry.rights == {}

    def test_galois_family_rights(self, workspaces_dir: Path) -> None:
        """Test a supplied right adjoint is recorded by base morphism."""
        ws = load_workspace([workspaces_dir / "galois_family.cat"])
        entry = ws.family("Gal")
        B = ws.category("B")
        assert set(entry.rights) == {B.mor("e")}
