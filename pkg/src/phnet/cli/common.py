"""Shared plumbing for the scenario commands: loading, error mapping, summaries."""

from __future__ import annotations

from pathlib import Path
from typing import Any

import typer
from pydantic import ValidationError

from phnet.analysis import COMMANDS, RunOptions, RunReport
from phnet.errors import (
    AlgebraicInconsistencyError,
    DomainViolationError,
    InfeasibleError,
    InvalidModelError,
    NoPreimageError,
    ScenarioError,
    StiffnessError,
    UnsupportedConfigurationError,
)
from phnet.scenario import LoadedScenario, load_scenario
from phnet.scenario.loader import format_validation_error
from phnet.utils.formatters import (
    format_value,
    print_error,
    print_json,
    print_success,
    print_summary,
    print_warning,
)
from phnet.utils.logging import bind_run, get_logger

log = get_logger(__name__)

EXIT_OK = 0
EXIT_ANALYSIS = 1
EXIT_INPUT = 2

INPUT_ERRORS = (
    ScenarioError,
    InvalidModelError,
    UnsupportedConfigurationError,
    ValidationError,
    DomainViolationError,
)
ANALYSIS_ERRORS = (InfeasibleError, StiffnessError, NoPreimageError, AlgebraicInconsistencyError)


def fail(exc: Exception) -> typer.Exit:
    """Print ``exc`` and return the Exit carrying its exit code."""
    if isinstance(exc, ValidationError):
        print_error(f"invalid options\n{format_validation_error(exc)}")
        return typer.Exit(EXIT_INPUT)
    print_error(str(exc))
    return typer.Exit(EXIT_INPUT if isinstance(exc, INPUT_ERRORS) else EXIT_ANALYSIS)


def prepare(
    scenario: Path, seed: int | None, **options: Any
) -> tuple[LoadedScenario, RunOptions]:
    from phnet.cli.app import get_context

    try:
        loaded = load_scenario(scenario)
        opts = RunOptions(config=get_context().ensure_config(), seed=seed, **options)
    except INPUT_ERRORS as exc:
        raise fail(exc) from exc
    bind_run(scenario=loaded.scenario.meta.name, scenario_hash=loaded.digest[:12])
    return loaded, opts


def execute(command: str, loaded: LoadedScenario, opts: RunOptions) -> RunReport:
    try:
        return COMMANDS[command](loaded, opts)
    except INPUT_ERRORS as exc:
        raise fail(exc) from exc
    except ANALYSIS_ERRORS as exc:
        raise fail(exc) from exc


def finish(
    reports: list[RunReport], opts: RunOptions, as_json: bool, prefixed: bool = False
) -> None:
    """Write every report, print it, and exit with the worst exit code."""
    for k, report in enumerate(reports):
        prefix = f"{k + 1:02d}_" if prefixed else ""
        report.write(report.default_path(opts.output_dir, prefix))
        if as_json:
            print_json(report.to_dict())
        else:
            show(report)
    code = max((r.exit_code for r in reports), default=EXIT_OK)
    if code:
        raise typer.Exit(code)


def show(report: RunReport) -> None:
    print_summary(f"{report.command}: {report.scenario}", summary_rows(report))
    for name, path in sorted(report.outputs.items()):
        typer.echo(f"  {name}: {path}")
    if report.ok:
        print_success(f"{report.command} ok")
    else:
        print_warning(f"{report.command} failed")


Row = tuple[str, Any]


def _steady_rows(steady: dict[str, Any]) -> list[Row]:
    rows: list[Row] = [
        ("feasible", steady["feasible"]),
        ("y*", steady["y_star"]),
        ("iterations", steady["iterations"]),
        ("max residual", max(steady["residuals"].values(), default=0.0)),
    ]
    if steady.get("lambda") is not None:
        rows.append(("lambda", steady["lambda"]))
    if steady.get("reason"):
        rows.append(("reason", steady["reason"]))
    return rows


def _dispatch_rows(d: dict[str, Any]) -> list[Row]:
    rows: list[Row] = [("lambda", d["lambda"])]
    rows += [(f"u_bar bus {bus}", value) for bus, value in d["u_bar"].items()]
    rows += [
        ("feasible", d["feasible"]),
        ("binding line", d["binding_line"]),
        ("binding ratio", d["binding_ratio"]),
        ("qp deviation", d["qp_deviation"]),
    ]
    return rows


def summary_rows(report: RunReport) -> list[Row]:
    result = report.result
    rows: list[Row] = []
    if "dispatch" in result:
        rows += _dispatch_rows(result["dispatch"])
    elif "steady_state" in result:
        rows += _steady_rows(result["steady_state"])
    if "qp_deviation" in result:
        rows.append(("qp deviation", result["qp_deviation"]))
    if report.command == "simulate" and "settle_time" in result:
        rows += [
            ("settle time", result["settle_time"]),
            ("V monotone", result["v_monotone"]),
            ("completed", result["completed"]),
            ("max disagreement", result["max_disagreement"]),
        ]
        if result.get("exit_event"):
            rows.append(("exit", result["exit_event"]))
        if "grid" in result:
            rows.append(("max |omega|", result["grid"]["max_frequency"]))
    if "validation" in result:
        for c in result["validation"]["checks"]:
            verdict = "pass" if c["passed"] else "FAIL"
            rows.append((c["name"], f"{verdict} ({format_value(c['measured'])})"))
    if "probe" in result:
        probe = result["probe"]
        rows += [("success fraction", probe["fraction"]), ("trials", probe["trials"])]
    if "error" in result:
        rows.append(("error", result["error"]))
    return rows
