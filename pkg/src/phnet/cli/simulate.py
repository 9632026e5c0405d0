"""phnet simulate: integrate the closed loop and write the trajectory CSV."""

from __future__ import annotations

from enum import Enum
from pathlib import Path
from typing import Optional

import typer


class Start(str, Enum):
    scenario = "scenario"
    equilibrium = "equilibrium"
    warm = "warm"


class Method(str, Enum):
    rk4_fixed = "rk4_fixed"
    dp45_adaptive = "dp45_adaptive"


def simulate_cmd(
    scenario: Path = typer.Argument(..., help="Scenario JSON file"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Output directory"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Override meta.seed"),
    tol: Optional[float] = typer.Option(None, "--tol", help="Feasibility tolerance"),
    allow_infeasible: bool = typer.Option(
        False, "--allow-infeasible", help="Simulate even without a feasible steady state"
    ),
    start: Start = typer.Option(Start.scenario, "--start", help="Initial state"),
    warm_radius: float = typer.Option(
        0.1, "--warm-radius", help="Controller noise radius for --start warm"
    ),
    method: Optional[Method] = typer.Option(None, "--method", help="Integrator"),
    t_end: Optional[float] = typer.Option(None, "--t-end", help="Horizon in seconds"),
    record_stride: Optional[int] = typer.Option(
        None, "--record-stride", help="Record every k-th accepted step"
    ),
    as_json: bool = typer.Option(False, "--json", help="Print the full report as JSON"),
) -> None:
    """Simulate the closed loop; report settle time, Lyapunov monotonicity and terminal values."""
    from phnet.cli.common import execute, finish, prepare

    loaded, opts = prepare(
        scenario,
        seed,
        out_dir=out,
        tol=tol,
        allow_infeasible=allow_infeasible,
        start=start.value,
        warm_radius=warm_radius,
        method=method.value if method else None,
        t_end=t_end,
        record_stride=record_stride,
    )
    finish([execute("simulate", loaded, opts)], opts, as_json)
