"""phnet check: solve the steady-state feasibility problem of a scenario."""

from __future__ import annotations

from pathlib import Path
from typing import Optional

import typer


def check_cmd(
    scenario: Path = typer.Argument(..., help="Scenario JSON file"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Report directory"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Override meta.seed"),
    tol: Optional[float] = typer.Option(None, "--tol", help="Feasibility tolerance"),
    as_json: bool = typer.Option(False, "--json", help="Print the full report as JSON"),
) -> None:
    """Check that a steady state with output agreement exists (exit 1 if not)."""
    from phnet.cli.common import execute, finish, prepare

    loaded, opts = prepare(scenario, seed, out_dir=out, tol=tol)
    finish([execute("check", loaded, opts)], opts, as_json)
