"""Replay workspace commands against stored structured reports.

``--update-golden`` rewrites the stored reports; without it a missing golden
file is a failure.
"""

from __future__ import annotations

import re
from pathlib import Path

import pytest

from cocart.cli.main import run_command
from cocart.cli.workspace import load_workspace
from cocart.config import Settings

from tests.conftest import GOLDEN, WORKSPACES

CASES: list[tuple[str, str]] = [
    ("arrow.cat", "validate"),
    ("galois.cat", "validate"),
    ("composite.cat", "validate"),
    ("parallel.cat", "validate"),
    ("glued.cat", "validate"),
    ("arrow.cat", "localize T"),
    ("arrow.cat", "localize T --depth 2"),
    ("arrow.cat", "localize I"),
    ("arrow.cat", "localize I --w U"),
    ("arrow.cat", "localize G"),
    ("arrow.cat", "localize G --w GIso"),
    ("galois.cat", "localize P --w PIso"),
    ("galois.cat", "localize I --w V"),
    ("parallel.cat", "localize Par"),
    ("glued.cat", "localize Cospan"),
    ("glued.cat", "localize Target"),
    ("composite.cat", "localize I --w U --method fractions"),
    ("arrow.cat", "localize Nope"),
    ("arrow.cat", "localize I --w Nope"),
    ("arrow.cat", "localize I --w GIso"),
    ("arrow.cat", "grothendieck nope"),
    ("arrow.cat", "family Nope"),
    ("arrow.cat", "derive-right f --resolution f"),
    ("galois.cat", "derive-left f --wc W --preserving"),
    ("galois.cat", "adjoint g"),
    ("parallel.cat", "localize Par --w S --method fractions"),
]


def _slug(workspace: str, line: str) -> str:
    stem = workspace.removesuffix(".cat")
    return f"{stem}__{re.sub(r'[^A-Za-z0-9]+', '_', line).strip('_')}"


@pytest.mark.parametrize(("workspace", "line"), CASES, ids=[_slug(w, c) for w, c in CASES])
def test_golden_report(workspace: str, line: str, update_golden: bool) -> None:
    """Test a command reproduces its stored report byte for byte."""
    ws = load_workspace([WORKSPACES / workspace])
    text = run_command(ws, line, Settings()).to_json()
    golden: Path = GOLDEN / f"{_slug(workspace, line)}.json"
    if update_golden:
        golden.parent.mkdir(parents=True, exist_ok=True)
        golden.write_text(text, encoding="utf-8")
    if not golden.exists():
        pytest.fail(f"missing golden report {golden.name}; rerun with --update-golden")
    assert text == golden.read_text(encoding="utf-8")


def test_every_golden_has_a_case() -> None:
    """Test no stored report is left without a command that replays it."""
    expected = {f"{_slug(w, c)}.json" for w, c in CASES}
    stored = {path.name for path in GOLDEN.glob("*.json")}
    assert stored == expected


def test_replay_is_deterministic() -> None:
    """Test two runs of the same command give identical reports."""
    ws = load_workspace([WORKSPACES / "galois.cat"])
    first = run_command(ws, "adjoint f --wc W", Settings()).to_json()
    second = run_command(load_workspace([WORKSPACES / "galois.cat"]), "adjoint f --wc W", Settings()).to_json()
    assert first == second
