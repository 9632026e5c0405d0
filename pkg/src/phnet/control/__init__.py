"""Output-agreement controllers attachable to the controlled nodes."""

from phnet.control.laws import (
    controller_inputs,
    controller_rates,
    steady_controller_state,
    warm_start,
)
from phnet.control.spec import ControllerKind, ControllerSpec, freeze, resolve

__all__ = [
    "ControllerKind",
    "ControllerSpec",
    "controller_inputs",
    "controller_rates",
    "freeze",
    "resolve",
    "steady_controller_state",
    "warm_start",
]
