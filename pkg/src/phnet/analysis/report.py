"""Run reports: one JSON document per executed command."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from phnet.utils.formatters import dumps


def slug(name: str) -> str:
    return re.sub(r"[^A-Za-z0-9_.-]+", "_", name).strip("_") or "scenario"


@dataclass
class RunReport:
    """Outcome of one command on one scenario.

    ``config`` embeds the raw scenario together with the effective settings
    (integrator, tolerances, seed and run options), which is enough to rerun
    the command with :func:`phnet.analysis.runs.replay`.
    """

    command: str
    scenario: str
    scenario_hash: str
    config: dict[str, Any]
    result: dict[str, Any] = field(default_factory=dict)
    outputs: dict[str, str] = field(default_factory=dict)
    ok: bool = True
    wall_clock: float | None = None

    @property
    def exit_code(self) -> int:
        return 0 if self.ok else 1

    def to_dict(self) -> dict[str, Any]:
        data: dict[str, Any] = {
            "command": self.command,
            "scenario": self.scenario,
            "scenario_hash": self.scenario_hash,
            "config": self.config,
            "result": self.result,
            "outputs": self.outputs,
            "ok": self.ok,
        }
        if self.wall_clock is not None:
            data["wall_clock"] = self.wall_clock
        return data

    def default_path(self, directory: Path, prefix: str = "") -> Path:
        return directory / f"{prefix}{slug(self.scenario)}_{self.command}.json"

    def write(self, path: Path) -> Path:
        path.parent.mkdir(parents=True, exist_ok=True)
        self.outputs["report"] = str(path)
        path.write_text(dumps(self.to_dict()))
        return path
