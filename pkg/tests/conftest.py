"""Pytest configuration and fixtures."""

from __future__ import annotations

from pathlib import Path

import pytest

from cocart.core.category import FinCat, chain, indiscrete, terminal
from cocart.core.functor import FunctorData, identity_functor
from cocart.core.marking import Marking, isos_only, marking_from_names
from cocart.core.sampling import monotone_map
from cocart.utils.logging import configure_logging

REPO_ROOT = Path(__file__).resolve().parent.parent
WORKSPACES = REPO_ROOT / "workspaces"
GOLDEN = Path(__file__).resolve().parent / "golden"


def pytest_addoption(parser: pytest.Parser) -> None:
    parser.addoption(
        "--update-golden",
        action="store_true",
        default=False,
        help="Rewrite golden reports under tests/golden/",
    )


@pytest.fixture(autouse=True)
def quiet_logging() -> None:
    """Route log events to stderr and keep them out of captured reports."""
    configure_logging("ERROR")


@pytest.fixture
def update_golden(request: pytest.FixtureRequest) -> bool:
    """Whether golden files should be rewritten."""
    return bool(request.config.getoption("--update-golden"))


@pytest.fixture
def workspaces_dir() -> Path:
    """Directory holding the example workspaces."""
    return WORKSPACES


@pytest.fixture
def arrow() -> FinCat:
    """The walking arrow [1] with morphisms id_0, id_1, 0->1."""
    return chain(1)


@pytest.fixture
def chain2() -> FinCat:
    """The poset [2]."""
    return chain(2)


@pytest.fixture
def point() -> FinCat:
    """The terminal category."""
    return terminal()


@pytest.fixture
def groupoid() -> FinCat:
    """Indiscrete groupoid on two objects."""
    return indiscrete(["a", "b"], name="G")


@pytest.fixture
def arrow_identity(arrow: FinCat) -> FunctorData:
    """id_[1]."""
    return identity_functor(arrow).renamed("f")


@pytest.fixture
def arrow_marked(arrow: FinCat) -> Marking:
    """[1] with its arrow marked."""
    return marking_from_names(arrow, ["0->1"])


@pytest.fixture
def arrow_isos(arrow: FinCat) -> Marking:
    """[1] with the minimal marking."""
    return isos_only(arrow)


@pytest.fixture
def galois(chain2: FinCat, arrow: FinCat) -> tuple[FunctorData, FunctorData]:
    """f: [2] → [1] (0, 1 ↦ 0; 2 ↦ 1) and its right adjoint g (0 ↦ 1; 1 ↦ 2)."""
    f = monotone_map(chain2, arrow, [0, 0, 1]).renamed("f")
    g = monotone_map(arrow, chain2, [1, 2]).renamed("g")
    return f, g
