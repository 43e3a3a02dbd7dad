"""Tests for settings and logging configuration."""

from __future__ import annotations

import logging

import pytest
from pydantic import ValidationError

from cocart.config import Settings
from cocart.utils.logging import configure_logging, get_logger


class TestSettings:
    """Tests for Settings.from_env."""

    def test_defaults(self, monkeypatch: pytest.MonkeyPatch) -> None:
        """Test defaults apply when nothing is set."""
        for name in ("BUDGET", "DEPTH", "SEED", "FORMAT", "MAX_ZIGZAG_WORDS"):
            monkeypatch.delenv(f"COCART_{name}", raising=False)
        settings = Settings.from_env()
        assert settings.budget == 2000
        assert settings.depth == 6
        assert settings.format == "structured"

    def test_environment(self, monkeypatch: pytest.MonkeyPatch) -> None:
        """Test COCART_* variables are read and coerced."""
        monkeypatch.setenv("COCART_DEPTH", "3")
        monkeypatch.setenv("COCART_FORMAT", "text")
        settings = Settings.from_env()
        assert settings.depth == 3
        assert settings.format == "text"

    def test_overrides_win(self, monkeypatch: pytest.MonkeyPatch) -> None:
        """Test explicit values beat the environment and None is ignored."""
        monkeypatch.setenv("COCART_BUDGET", "10")
        settings = Settings.from_env(budget=99, seed=None)
        assert settings.budget == 99
        assert settings.seed == 0

    def test_invalid(self) -> None:
        """Test budgets must be positive."""
        with pytest.raises(ValidationError):
            Settings.from_env(budget=0)

    def test_frozen(self) -> None:
        """Test settings cannot be mutated."""
        settings = Settings()
        with pytest.raises(ValidationError):
            settings.depth = 2  # type: ignore[misc]

    def test_node_cap(self, monkeypatch: pytest.MonkeyPatch) -> None:
        """Test the transient node cap is unset by default and read from the environment."""
        monkeypatch.delenv("COCART_MAX_NODES", raising=False)
        assert Settings.from_env().max_nodes is None
        monkeypatch.setenv("COCART_MAX_NODES", "500")
        assert Settings.from_env().max_nodes == 500

    def test_merged(self) -> None:
        """Test merged applies non-None values and validates them."""
        settings = Settings(depth=4, seed=7)
        merged = settings.merged(depth=2, budget=None)
        assert (merged.depth, merged.seed, merged.budget) == (2, 7, 2000)
        assert settings.merged() is settings
        with pytest.raises(ValidationError):
            settings.merged(depth=0)


class TestLogging:
    """Tests for configure_logging."""

    def test_level(self) -> None:
        """Test the root level follows the argument."""
        configure_logging("DEBUG", "json")
        assert logging.getLogger().level == logging.DEBUG
        configure_logging("WARNING")
        assert logging.getLogger().level == logging.WARNING

    def test_unknown_level_falls_back(self) -> None:
        """Test an unknown level name means WARNING."""
        configure_logging("LOUD")
        assert logging.getLogger().level == logging.WARNING

    def test_logger_emits_to_stderr(self, capsys: pytest.CaptureFixture[str]) -> None:
        """Test log events never reach stdout."""
        configure_logging("INFO", "json")
        get_logger("cocart.test").info("sample_event", answer=42)
        captured = capsys.readouterr()
        assert "sample_event" not in captured.out
