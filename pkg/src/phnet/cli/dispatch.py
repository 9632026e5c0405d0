"""phnet dispatch: optimal steady-state input allocation."""

from __future__ import annotations

from pathlib import Path
from typing import Optional

import typer


def dispatch_cmd(
    scenario: Path = typer.Argument(..., help="Scenario JSON file"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Report directory"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Override meta.seed"),
    tol: Optional[float] = typer.Option(None, "--tol", help="Feasibility tolerance"),
    as_json: bool = typer.Option(False, "--json", help="Print the full report as JSON"),
) -> None:
    """Compute lambda and the optimal inputs, cross-checked against a direct KKT solve."""
    from phnet.cli.common import execute, finish, prepare

    loaded, opts = prepare(scenario, seed, out_dir=out, tol=tol)
    finish([execute("dispatch", loaded, opts)], opts, as_json)
