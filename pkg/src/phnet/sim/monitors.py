"""Lyapunov, residual and settle-time monitors over recorded trajectories."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any

import numpy as np

from phnet.config.defaults import MONOTONE_SLACK, SETTLE_TOL, SETTLE_WINDOW
from phnet.control import ControllerSpec, resolve
from phnet.energy import bregman
from phnet.errors import DomainViolationError
from phnet.network import NetworkSpec
from phnet.sim.trajectory import Trajectory
from phnet.steadystate import Equilibrium
from phnet.utils.logging import get_logger

log = get_logger(__name__)


@dataclass(frozen=True)
class MonitorReport:
    v_monotone: bool
    worst_increment: float
    max_alg_residual: float
    min_domain_margin: float
    settle_time: float | None
    v_valid: bool = True

    def to_dict(self) -> dict[str, Any]:
        return {
            "v_monotone": self.v_monotone,
            "worst_increment": self.worst_increment,
            "max_alg_residual": self.max_alg_residual,
            "min_domain_margin": self.min_domain_margin,
            "settle_time": self.settle_time,
            "v_valid": self.v_valid,
        }


def storage_terms(
    traj: Trajectory, network: NetworkSpec, equilibrium: Equilibrium
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Per-sample Bregman storages W_n (differential nodes), W_e and W_c; NaN outside a domain."""
    k = len(traj)
    w_n = np.zeros(k)
    w_e = np.zeros(k)
    w_c = 0.5 * np.sum((traj.xi - equilibrium.xi.reshape(1, -1)) ** 2, axis=1)
    layout = network.layout
    eta_ref = network.edges.split(equilibrium.eta)
    for s in range(k):
        try:
            for i, sl in layout.node_slices.items():
                w_n[s] += bregman(network.nodes[i].H, traj.x1[s, sl], equilibrium.x[i])
            blocks = network.edges.split(traj.eta[s])
            for e, h in enumerate(network.edges.hamiltonians):
                w_e[s] += bregman(h, blocks[e], eta_ref[e])
        except DomainViolationError:
            w_n[s] = w_e[s] = np.nan
    return w_n, w_e, w_c


def lyapunov_series(
    traj: Trajectory,
    spec: NetworkSpec,
    controller: ControllerSpec,
    equilibrium: Equilibrium,
    slack: float = MONOTONE_SLACK,
    settle_tol: float = SETTLE_TOL,
    settle_window: float = SETTLE_WINDOW,
) -> MonitorReport:
    """Compute V = W_n + W_e + W_c per sample and check it never increases beyond slack.

    The series are stored in ``traj.monitors``. ``equilibrium.xi`` must be the
    steady controller state of the resolved controller.
    """
    network, resolved = resolve(controller, spec)
    if equilibrium.xi.size != resolved.state_size:
        raise ValueError(
            f"equilibrium xi has {equilibrium.xi.size} entries, "
            f"controller has {resolved.state_size}"
        )
    w_n, w_e, w_c = storage_terms(traj, network, equilibrium)
    v = w_n + w_e + w_c
    traj.monitors.update({"V": v, "W_n": w_n, "W_e": w_e, "W_c": w_c})

    valid = bool(np.all(np.isfinite(v)))
    finite = v[np.isfinite(v)]
    eps = slack * (1.0 + (finite[0] if finite.size else 0.0))
    increments = np.diff(finite) if finite.size > 1 else np.zeros(0)
    worst = float(max(np.max(increments, initial=0.0), 0.0))
    monotone = bool(np.all(increments <= eps))
    if not monotone:
        log.warning("lyapunov_increase", worst_increment=worst, slack=eps)

    window = min(settle_window, float(traj.times[-1] - traj.times[0]))
    return MonitorReport(
        v_monotone=monotone,
        worst_increment=worst,
        max_alg_residual=float(np.max(traj.monitors["alg_residual"])),
        min_domain_margin=float(np.min(traj.monitors["domain_margin"])),
        settle_time=settle(traj, equilibrium.y_star, settle_tol, window),
        v_valid=valid,
    )


def settle(traj: Trajectory, y_star: np.ndarray, tol: float, window: float) -> float | None:
    """Earliest sample time t with every output within ``tol`` of y* on [t, t + window]."""
    if tol <= 0:
        raise ValueError("settle tolerance must be positive")
    if len(traj) == 0:
        return None
    m = traj.m
    target = np.tile(np.asarray(y_star, dtype=np.float64).reshape(m), traj.y.shape[1] // m)
    err = np.max(np.abs(traj.y - target), axis=1)
    bad = np.flatnonzero(~(err <= tol))
    t_last = float(traj.times[-1])

    # For each candidate k the next bad sample after it must lie beyond t_k + window.
    next_bad = np.full(len(traj), len(traj))
    j = len(traj)
    bad_set = set(bad.tolist())
    for k in range(len(traj) - 1, -1, -1):
        if k in bad_set:
            j = k
        next_bad[k] = j
    for k in range(len(traj)):
        t = float(traj.times[k])
        if t + window > t_last + 1e-12:
            break
        if next_bad[k] == len(traj) or float(traj.times[next_bad[k]]) > t + window:
            if k not in bad_set:
                return t
    return None


def max_disagreement(y: np.ndarray, m: int) -> float:
    """max_ij |y_i - y_j|_inf for one flat output sample."""
    blocks = np.asarray(y).reshape(-1, m)
    return float(np.max(np.max(blocks, axis=0) - np.min(blocks, axis=0)))
