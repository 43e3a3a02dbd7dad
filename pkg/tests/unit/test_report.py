"""Tests for command reports and DOT export."""

from __future__ import annotations

import pytest
from pydantic import ValidationError
from rich.console import Console

from cocart.cli.dot import MARKED_STYLE, export_dot
from cocart.cli.report import EXIT_CODES, Report, error_report
from cocart.core.category import FinCat, discrete
from cocart.core.exceptions import BulletFailed, DSLSyntaxError
from cocart.core.functor import FunctorData
from cocart.core.marking import Marking
from cocart.fibrations.grothendieck import grothendieck_cocart


class TestReport:
    """Tests for the Report model."""

    def test_exit_codes(self) -> None:
        """Test every status maps to its exit code."""
        assert EXIT_CODES == {"ok": 0, "fails_cocartesian": 1, "not_certified": 3, "error": 2}
        assert Report(command="validate").exit_code == 0
        assert Report(command="localize", status="not_certified").exit_code == 3

    def test_unknown_status_rejected(self) -> None:
        """Test only the four report statuses validate."""
        with pytest.raises(ValidationError):
            Report(command="kan", status="negative")  # type: ignore[arg-type]

    def test_json_round_trip(self) -> None:
        """Test the structured form parses back to an equal report."""
        report = Report(command="derive-left", args={"functor": "f"}, result={"status": "exists"}, notes=["n"])
        text = report.to_json()
        assert text.endswith("\n")
        assert Report.from_json(text) == report

    def test_json_is_stable(self) -> None:
        """Test keys are sorted so that equal reports serialize identically."""
        first = Report(command="x", result={"b": 1, "a": 2})
        second = Report(command="x", result={"a": 2, "b": 1})
        assert first.to_json() == second.to_json()
        assert first.to_json().index('"a"') < first.to_json().index('"b"')

    def test_error_report_attributes(self) -> None:
        """Test structured errors carry the attributes of the exception."""
        report = error_report("derive-left", {}, BulletFailed("i' is not an equivalence", 2))
        assert report.status == "error"
        assert report.error == {"type": "BulletFailed", "message": "i' is not an equivalence", "bullet": 2}

    def test_error_report_position(self) -> None:
        """Test syntax errors keep line and column."""
        report = error_report("parse", {}, DSLSyntaxError("expected ':'", 2, 11))
        assert report.error is not None
        assert (report.error["line"], report.error["column"]) == (2, 11)

    def test_render_text(self) -> None:
        """Test the text summary lists status, arguments and notes."""
        console = Console(record=True, width=120)
        Report(command="localize", args={"w": "U"}, result={"method": "fractions"}, notes=["hello"]).render_text(console)
        text = console.export_text()
        assert "cocart localize" in text
        assert "--w" in text
        assert "fractions" in text
        assert "note: hello" in text


class TestExportDot:
    """Tests for export_dot."""

    def test_arrow(self, arrow: FinCat) -> None:
        """Test [1] has two nodes and one edge."""
        assert export_dot(arrow) == (
            'digraph "[1]" {\n'
            "  rankdir=LR;\n"
            '  n0 [label="0"];\n'
            '  n1 [label="1"];\n'
            '  n0 -> n1 [label="0->1"];\n'
            "}\n"
        )

    def test_marked_style(self, arrow: FinCat, arrow_marked: Marking) -> None:
        """Test marked arrows are drawn in the marked style."""
        text = export_dot(arrow, arrow_marked)
        assert f'[label="0->1", {MARKED_STYLE}]' in text

    def test_correspondence_degrees(self, arrow_identity: FunctorData) -> None:
        """Test objects of a correspondence carry their degree."""
        text = export_dot(grothendieck_cocart(arrow_identity))
        assert 'n0 [label="0:0 [0]"]' in text
        assert 'n3 [label="1:1 [1]"]' in text
        assert text.count(" -> ") == 5

    def test_quoting(self) -> None:
        """Test quotes in names are escaped."""
        text = export_dot(discrete(['a"b'], name="Q"))
        assert 'label="a\\"b"' in text
