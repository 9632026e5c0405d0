"""Microgrid front-end: generators, droop inverters and frequency-dependent loads."""

from phnet.microgrid.builder import (
    build,
    initial_state,
    inject_failure,
    recover_angles,
    swing_rates,
)
from phnet.microgrid.config import BusConfig, GridConfig, LineConfig
from phnet.microgrid.dispatch import DispatchReport, dispatch

__all__ = [
    "BusConfig",
    "DispatchReport",
    "GridConfig",
    "LineConfig",
    "build",
    "dispatch",
    "initial_state",
    "inject_failure",
    "recover_angles",
    "swing_rates",
]
