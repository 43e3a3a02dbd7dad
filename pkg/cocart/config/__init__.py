"""Runtime settings for cocart."""

from __future__ import annotations

import os
from typing import Any, Literal

from pydantic import BaseModel, Field

ENV_PREFIX = "COCART_"


class Settings(BaseModel):
    """Budgets, depths and output options shared by every command.

    Values come from (highest priority first) explicit keyword arguments,
    ``COCART_*`` environment variables and the field defaults.
    """

    budget: int = Field(default=2000, ge=1)
    depth: int = Field(default=6, ge=1)
    seed: int = 0
    format: Literal["structured", "text"] = "structured"
    max_zigzag_words: int = Field(default=200_000, ge=1)
    max_nodes: int | None = Field(default=None, ge=1)

    model_config = {"frozen": True}

    @classmethod
    def from_env(cls, **overrides: Any) -> Settings:
        """Build settings from the environment.

        Args:
            **overrides: Explicit values; ``None`` entries are ignored

        Returns:
            Validated Settings instance
        """
        values: dict[str, Any] = {}
        for name in cls.model_fields:
            raw = os.environ.get(f"{ENV_PREFIX}{name.upper()}")
            if raw is not None and raw != "":
                values[name] = raw
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls.model_validate(values)

    def merged(self, **overrides: Any) -> Settings:
        """Copy with the non-None overrides applied and validated."""
        updates = {k: v for k, v in overrides.items() if v is not None}
        if not updates:
            return self
        return type(self).model_validate({**self.model_dump(), **updates})
