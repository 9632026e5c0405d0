"""phnet probe: estimate the basin of attraction around the steady state."""

from __future__ import annotations

from pathlib import Path
from typing import Optional

import typer


def probe_cmd(
    scenario: Path = typer.Argument(..., help="Scenario JSON file"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Report directory"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Override meta.seed"),
    tol: Optional[float] = typer.Option(None, "--tol", help="Feasibility tolerance"),
    radius: float = typer.Option(0.1, "--radius", "-r", help="Perturbation radius"),
    trials: int = typer.Option(20, "--trials", "-n", help="Number of perturbed starts"),
    workers: Optional[int] = typer.Option(None, "--workers", "-w", help="Worker processes"),
    progress: Optional[bool] = typer.Option(
        None, "--progress/--no-progress", help="Show a progress bar (default: probe.show_progress)"
    ),
    as_json: bool = typer.Option(False, "--json", help="Print the full report as JSON"),
) -> None:
    """Fraction of perturbed starts that settle at the steady state."""
    from phnet.cli.common import execute, finish, prepare

    loaded, opts = prepare(
        scenario,
        seed,
        out_dir=out,
        tol=tol,
        radius=radius,
        trials=trials,
        workers=workers,
        show_progress=False if as_json else progress,
    )
    finish([execute("probe", loaded, opts)], opts, as_json)
