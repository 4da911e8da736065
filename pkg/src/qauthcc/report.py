"""Machine-readable reports emitted by the command line."""

from __future__ import annotations

import dataclasses
import datetime as dt
import json
from dataclasses import dataclass, field
from importlib import resources
from typing import Any

from . import __version__
from .errors import ConfigurationError

SCHEMA_VERSION = "1.0"
COMMANDS = ("run", "analyze", "compare", "table")


@dataclass
class Report:
    command: str
    protocol: str | None = None
    params: dict[str, Any] | None = None
    adversary: str | None = None
    tally: dict[str, int] | None = None
    model: str | None = None
    expression: str | None = None
    cost: int | None = None
    outcome: dict[str, Any] | None = None
    rates: dict[str, dict] | None = None
    adversarial: dict[str, Any] | None = None
    analysis: dict[str, Any] | None = None
    comparison: dict[str, Any] | None = None
    table: list[dict[str, Any]] | None = None
    tool_version: str = __version__
    schema_version: str = SCHEMA_VERSION
    generated_at: str | None = field(default=None)

    def __post_init__(self):
        if self.command not in COMMANDS:
            raise ConfigurationError(f"unknown report command {self.command!r}")

    def stamp(self, deterministic: bool) -> "Report":
        """Set or clear ``generated_at``; deterministic reports carry no timestamp."""
        self.generated_at = None if deterministic else dt.datetime.now(dt.timezone.utc).isoformat(timespec="seconds")
        return self

    def to_dict(self) -> dict[str, Any]:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "Report":
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise ConfigurationError(f"unknown report fields: {', '.join(sorted(unknown))}")
        return cls(**data)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True, ensure_ascii=False, allow_nan=False) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "Report":
        return cls.from_dict(json.loads(text))


def load_schema() -> dict:
    """JSON Schema (draft 2020-12) that every structured report validates against."""
    text = resources.files(__package__).joinpath("report.schema.json").read_text(encoding="utf-8")
    return json.loads(text)
