"""Numerical hygiene checks and command runners producing run reports."""

from phnet.analysis.checks import CheckResult, ValidationReport, validate_network
from phnet.analysis.report import RunReport
from phnet.analysis.runs import (
    COMMANDS,
    RunOptions,
    integrator_settings,
    replay,
    run_check,
    run_dispatch,
    run_experiments,
    run_probe,
    run_simulate,
    run_validate,
    steady_state,
)

__all__ = [
    "COMMANDS",
    "CheckResult",
    "RunOptions",
    "RunReport",
    "ValidationReport",
    "integrator_settings",
    "replay",
    "run_check",
    "run_dispatch",
    "run_experiments",
    "run_probe",
    "run_simulate",
    "run_validate",
    "steady_state",
    "validate_network",
]
