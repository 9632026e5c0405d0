"""phnet run: execute every experiment listed in a scenario."""

from __future__ import annotations

from pathlib import Path
from typing import Optional

import typer


def run_cmd(
    scenario: Path = typer.Argument(..., help="Scenario JSON file"),
    out: Optional[Path] = typer.Option(None, "--out", "-o", help="Output directory"),
    seed: Optional[int] = typer.Option(None, "--seed", help="Override meta.seed"),
    tol: Optional[float] = typer.Option(None, "--tol", help="Feasibility tolerance"),
    parallel: bool = typer.Option(False, "--parallel", help="Run experiments concurrently"),
    as_json: bool = typer.Option(False, "--json", help="Print the full reports as JSON"),
) -> None:
    """Run the scenario's experiments in order; exit with the worst exit code."""
    from pydantic import ValidationError

    from phnet.analysis import run_experiments
    from phnet.cli.common import ANALYSIS_ERRORS, INPUT_ERRORS, fail, finish, prepare
    from phnet.utils.formatters import print_warning

    loaded, opts = prepare(scenario, seed, out_dir=out, tol=tol)
    if not loaded.scenario.experiments:
        print_warning("scenario lists no experiments")
        return
    try:
        reports = run_experiments(loaded, opts, parallel=parallel)
    except (*INPUT_ERRORS, *ANALYSIS_ERRORS, ValidationError) as exc:
        raise fail(exc) from exc
    finish(reports, opts, as_json, prefixed=True)
