"""Closed-loop integration, monitors and basin probing."""

from phnet.sim.closed_loop import ClosedLoop, Observation
from phnet.sim.monitors import (
    MonitorReport,
    lyapunov_series,
    max_disagreement,
    settle,
    storage_terms,
)
from phnet.sim.probe import ProbeResult, basin_probe
from phnet.sim.runner import integrate
from phnet.sim.trajectory import ExitEvent, Trajectory

__all__ = [
    "ClosedLoop",
    "ExitEvent",
    "MonitorReport",
    "Observation",
    "ProbeResult",
    "Trajectory",
    "basin_probe",
    "integrate",
    "lyapunov_series",
    "max_disagreement",
    "settle",
    "storage_terms",
]
