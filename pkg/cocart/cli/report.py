"""Command reports: structured JSON documents and rich text summaries."""

from __future__ import annotations

import json
from typing import Any, Literal

from pydantic import BaseModel, Field
from rich.console import Console
from rich.table import Table

Status = Literal["ok", "fails_cocartesian", "not_certified", "error"]

EXIT_CODES: dict[str, int] = {
    "ok": 0,
    "fails_cocartesian": 1,
    "not_certified": 3,
    "error": 2,
}


class Report(BaseModel):
    """Outcome of one command.

    ``result`` holds the command-specific payload built from the ``to_dict``
    methods of the domain objects; ``timing`` stays empty unless requested
    so that structured output replays byte for byte.
    """

    command: str
    args: dict[str, Any] = Field(default_factory=dict)
    status: Status = "ok"
    result: dict[str, Any] = Field(default_factory=dict)
    notes: list[str] = Field(default_factory=list)
    error: dict[str, Any] | None = None
    timing: float | None = None

    @property
    def exit_code(self) -> int:
        """Process exit code for the status."""
        return EXIT_CODES[self.status]

    def to_json(self) -> str:
        """Stable structured form (sorted keys, indent 2, trailing newline)."""
        return json.dumps(self.model_dump(mode="json"), sort_keys=True, indent=2, ensure_ascii=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> Report:
        """Parse a structured report."""
        return cls.model_validate_json(text)

    def render_text(self, console: Console) -> None:
        """Print a summary table followed by any notes."""
        table = Table(title=f"cocart {self.command}", show_header=True)
        table.add_column("Field", style="bold")
        table.add_column("Value")
        table.add_row("status", self.status)
        for key, value in sorted(self.args.items()):
            table.add_row(f"--{key}", str(value))
        for key, value in sorted(self.result.items()):
            table.add_row(key, _short(value))
        if self.error is not None:
            table.add_row("error", f"{self.error.get('type')}: {self.error.get('message')}")
        if self.timing is not None:
            table.add_row("timing", f"{self.timing:.3f}s")
        console.print(table)
        for note in self.notes:
            console.print(f"[yellow]note:[/yellow] {note}")


def _short(value: Any) -> str:
    if isinstance(value, dict | list):
        text = json.dumps(value, sort_keys=True, ensure_ascii=False)
        return text if len(text) <= 120 else text[:117] + "..."
    return str(value)


def error_report(command: str, args: dict[str, Any], error: Exception) -> Report:
    """Report for a command aborted by an exception."""
    details: dict[str, Any] = {"type": type(error).__name__, "message": str(error)}
    for attribute in ("construct", "line", "column", "bullet", "kind", "cell", "budget"):
        value = getattr(error, attribute, None)
        if value is not None:
            details[attribute] = value
    return Report(command=command, args=args, status="error", error=details)
