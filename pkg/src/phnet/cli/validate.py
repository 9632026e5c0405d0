"""phnet validate: numerical hygiene checks on a scenario's own objects."""

from __future__ import annotations

from pathlib import Path
from typing import Optional

import typer


def validate_cmd(
    scenario: Path = typer.Argument(..., help="Scenario JSON file"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Report directory"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Override meta.seed"),
    samples: int = typer.Option(100, "--samples", help="Random samples per check"),
    as_json: bool = typer.Option(False, "--json", help="Print the full report as JSON"),
) -> None:
    """Run skew/PD/rank, gradient, Bregman and balance checks (exit 1 on any failure)."""
    from phnet.cli.common import execute, finish, prepare

    loaded, opts = prepare(scenario, seed, out_dir=out, samples=samples)
    finish([execute("validate", loaded, opts)], opts, as_json)
