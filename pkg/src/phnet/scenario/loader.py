"""Read, validate and fingerprint scenario files."""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from pydantic import ValidationError

from phnet.errors import ScenarioError
from phnet.scenario.schema import ScenarioFile


@dataclass(frozen=True)
class LoadedScenario:
    scenario: ScenarioFile
    raw: dict[str, Any]
    path: Path | None
    digest: str


def canonical_hash(raw: dict[str, Any]) -> str:
    """sha256 of the scenario as canonical (sorted, compact) JSON."""
    text = json.dumps(raw, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(text.encode()).hexdigest()


def format_validation_error(exc: ValidationError) -> str:
    lines = []
    for err in exc.errors():
        loc = ".".join(str(part) for part in err["loc"]) or "<root>"
        lines.append(f"{loc}: {err['msg']}")
    return "\n".join(lines)


def parse_scenario(raw: dict[str, Any], path: Path | None = None) -> LoadedScenario:
    try:
        scenario = ScenarioFile.model_validate(raw)
    except ValidationError as exc:
        where = f"{path}: " if path else ""
        raise ScenarioError(f"{where}invalid scenario\n{format_validation_error(exc)}") from exc
    return LoadedScenario(scenario=scenario, raw=raw, path=path, digest=canonical_hash(raw))


def load_scenario(path: str | Path) -> LoadedScenario:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario {path}: {exc}") from exc
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(
            f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(raw, dict):
        raise ScenarioError(f"{path}: scenario must be a JSON object")
    return parse_scenario(raw, path)
