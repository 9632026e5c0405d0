"""Controller input and rate laws, plus the controller steady state."""

from __future__ import annotations

import numpy as np

from phnet.control.spec import ControllerSpec
from phnet.errors import InfeasibleError, InvalidModelError
from phnet.graph import laplacian
from phnet.steadystate import SteadyStateReport


def controller_inputs(c: ControllerSpec, xi: np.ndarray) -> dict[int, np.ndarray]:
    """Inputs u_i keyed by network node, computed from the controller state alone."""
    if c.kind == "none":
        return {}
    if c.kind == "constant":
        assert c.levels is not None
        return {node: c.levels[k].copy() for k, node in enumerate(c.nodes)}

    blocks = _blocks(c, xi)
    if c.kind == "integral":
        return {node: blocks[k].copy() for k, node in enumerate(c.nodes)}
    return {
        node: np.linalg.solve(c.weights[k], blocks[k]) for k, node in enumerate(c.nodes)
    }


def controller_rates(
    c: ControllerSpec, xi: np.ndarray, y: np.ndarray
) -> tuple[np.ndarray, dict[int, np.ndarray]]:
    """(xi_dot, u) for outputs ``y`` given as an (N, m) array over all network nodes."""
    u = controller_inputs(c, xi)
    if not c.is_dynamic:
        return np.zeros(0), u

    assert c.y_star is not None
    y = np.asarray(y, dtype=np.float64)
    error = np.stack([c.y_star - y[node] for node in c.nodes])
    if c.kind == "integral":
        return error.reshape(-1), u

    assert c.comm is not None
    blocks = _blocks(c, xi)
    consensus = -(laplacian(c.comm) @ blocks)
    correction = np.stack([np.linalg.solve(c.weights[k], error[k]) for k in range(len(c.nodes))])
    return (consensus + correction).reshape(-1), u


def steady_controller_state(c: ControllerSpec, report: SteadyStateReport) -> np.ndarray:
    """Controller state at which the closed loop rests on ``report``'s steady state."""
    if not report.feasible:
        raise InfeasibleError(f"no steady controller state: {report.reason or 'infeasible'}")
    if c.kind == "integral":
        if report.u_bar is None:
            raise InvalidModelError("report carries no steady inputs")
        return np.concatenate([report.u_bar[node] for node in c.nodes])
    if c.kind == "distributed":
        if report.lam is None:
            raise InvalidModelError("distributed steady state needs an optimal report with lambda")
        return np.tile(report.lam, len(c.nodes))
    return np.zeros(0)


def warm_start(
    c: ControllerSpec, xi_bar: np.ndarray, radius: float, rng: np.random.Generator
) -> ControllerSpec:
    """Controller with xi0 drawn uniformly from the box of ``radius`` around ``xi_bar``."""
    noise = rng.uniform(-radius, radius, size=xi_bar.shape)
    return c.with_xi0(xi_bar + noise)


def _blocks(c: ControllerSpec, xi: np.ndarray) -> np.ndarray:
    xi = np.asarray(xi, dtype=np.float64)
    if xi.shape != (c.state_size,):
        raise ValueError(f"controller state has shape {xi.shape}, expected ({c.state_size},)")
    return xi.reshape(len(c.nodes), c.m)
