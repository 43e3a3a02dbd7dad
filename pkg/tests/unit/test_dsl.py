"""Tests for the workspace language parser and serializer."""

from __future__ import annotations

from pathlib import Path

import pytest

from cocart.cli.dsl import CategoryDecl, FamilyDecl, FunctorDecl, MarkingDecl, parse_source, serialize, tokenize
from cocart.core.exceptions import DSLSyntaxError

SOURCE = """
# walking arrow
category I {
  objects: 0, 1;
  arrows: u: 0 -> 1;
}
marking U in I { u }
functor f : I -> I { obj 0 -> 0; obj 1 -> 1; arr u -> u; }
"""


class TestTokenize:
    """Tests for the tokenizer."""

    def test_comments_and_blanks_dropped(self) -> None:
        """Test comments and whitespace produce no tokens."""
        kinds = [t.kind for t in tokenize("# only a comment\n  \n")]
        assert kinds == ["eof"]

    def test_positions(self) -> None:
        """Test tokens carry 1-based line and column."""
        tokens = list(tokenize("category C {\n  objects: a;\n}"))
        objects = next(t for t in tokens if t.text == "objects")
        assert (objects.line, objects.column) == (2, 3)

    def test_unexpected_character(self) -> None:
        """Test a stray character is reported with its position."""
        with pytest.raises(DSLSyntaxError, match="unexpected character") as exc_info:
            list(tokenize("category C { objects: a$; }"))
        assert (exc_info.value.line, exc_info.value.column) == (1, 24)


class TestParseSource:
    """Tests for parse_source."""

    def test_statements(self) -> None:
        """Test each statement kind is recognized."""
        statements = parse_source(SOURCE)
        assert [type(s) for s in statements] == [CategoryDecl, MarkingDecl, FunctorDecl]
        category = statements[0]
        assert isinstance(category, CategoryDecl)
        assert category.objects == ("0", "1")
        assert category.arrows == (("u", "0", "1"),)
        assert category.line == 3

    def test_relations_and_words(self) -> None:
        """Test relations hold dot-separated words."""
        (category,) = parse_source("category M { objects: x; arrows: e: x -> x; relations: e.e = e; }")
        assert isinstance(category, CategoryDecl)
        assert category.relations == ((("e", "e"), ("e",)),)

    def test_family(self) -> None:
        """Test fibers, maps and rights of a family."""
        (family,) = parse_source("family Q over B { fiber 0 = P marked W; map e = f; right e = g; }")
        assert isinstance(family, FamilyDecl)
        assert family.fibers == (("0", "P", "W"),)
        assert family.maps == (("e", "f"),)
        assert family.rights == (("e", "g"),)

    def test_empty_marking(self) -> None:
        """Test a marking may list no arrows."""
        (marking,) = parse_source("marking Iso in I { }")
        assert isinstance(marking, MarkingDecl)
        assert marking.members == ()

    def test_missing_colon(self) -> None:
        """Test the error names the expected token and its position."""
        with pytest.raises(DSLSyntaxError, match="expected ':', found 'a'") as exc_info:
            parse_source("category C {\n  objects a;\n}")
        assert exc_info.value.line == 2
        assert exc_info.value.column == 11

    def test_unknown_statement(self) -> None:
        """Test a stray keyword at top level is rejected."""
        with pytest.raises(DSLSyntaxError, match="'category', 'marking', 'functor' or 'family'"):
            parse_source("object x;")

    def test_unterminated(self) -> None:
        """Test running out of input is reported as end of input."""
        with pytest.raises(DSLSyntaxError, match="end of input"):
            parse_source("category C { objects: a;")


class TestSerialize:
    """Tests for the canonical serializer."""

    def test_round_trip(self) -> None:
        """Test serialize then parse gives back the same statements."""
        statements = parse_source(SOURCE)
        text = serialize(statements)
        assert parse_source(text) == statements
        assert serialize(parse_source(text)) == text

    def test_canonical_marking(self) -> None:
        """Test the canonical form of a marking."""
        assert serialize(parse_source("marking U in I {u}")) == "marking U in I { u }\n"

    @pytest.mark.parametrize("name", ["arrow.cat", "galois.cat", "square.cat", "galois_family.cat"])
    def test_example_workspaces(self, workspaces_dir: Path, name: str) -> None:
        """Test the bundled workspaces are stable under serialization."""
        statements = parse_source((workspaces_dir / name).read_text(encoding="utf-8"))
        assert parse_source(serialize(statements)) == statements
