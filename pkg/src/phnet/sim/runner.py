"""Time integration of the closed loop with domain-exit handling."""

from __future__ import annotations

import math

import numpy as np

from phnet.config.models import IntegratorConfig
from phnet.control import ControllerSpec
from phnet.errors import AlgebraicInconsistencyError, DomainViolationError, StiffnessError
from phnet.network import NetworkSpec, ReducedState
from phnet.sim.closed_loop import ClosedLoop, Observation
from phnet.sim.integrators import dp45_step, error_norm, rk4_step, step_factor
from phnet.sim.trajectory import ExitEvent, Trajectory, column_labels
from phnet.utils.logging import get_logger

log = get_logger(__name__)

_LEAVES_DOMAIN = (DomainViolationError, AlgebraicInconsistencyError)
_MIN_STEP_RATIO = 1e-12


class _Recorder:
    def __init__(self, loop: ClosedLoop) -> None:
        self.loop = loop
        self.times: list[float] = []
        self.states: list[np.ndarray] = []
        self.obs: list[Observation] = []

    def record(self, t: float, vec: np.ndarray, obs: Observation) -> None:
        self.times.append(t)
        self.states.append(vec.copy())
        self.obs.append(obs)

    def build(self, exit_event: ExitEvent | None, metadata: dict[str, object]) -> Trajectory:
        layout = self.loop.layout
        states = np.array(self.states).reshape(len(self.states), layout.size)
        a = layout.eta_size
        b = a + layout.x1_size
        return Trajectory(
            times=np.array(self.times),
            eta=states[:, :a],
            x1=states[:, a:b],
            xi=states[:, b:],
            y=np.array([o.y for o in self.obs]),
            u=np.array([o.u for o in self.obs]),
            labels=column_labels(
                self.loop.network, self.loop.controller.nodes, layout.xi_size
            ),
            monitors={
                "alg_residual": np.array([o.alg_residual for o in self.obs]),
                "domain_margin": np.array([o.domain_margin for o in self.obs]),
            },
            exit_event=exit_event,
            metadata=metadata,
        )


def integrate(
    spec: NetworkSpec,
    controller: ControllerSpec,
    s0: ReducedState,
    cfg: IntegratorConfig,
    seed: int | None = None,
) -> Trajectory:
    """Integrate the closed loop from ``s0`` until ``cfg.t_end`` or a domain exit.

    ``s0.xi`` must match the controller state after fail-mode resolution; an
    empty ``s0.xi`` takes the controller's ``xi0``. Leaving a convexity domain
    truncates the trajectory and records an exit event; an adaptive step that
    underflows for accuracy reasons raises StiffnessError.
    """
    loop = ClosedLoop(spec, controller)
    vec = loop.initial_vector(s0)
    if vec.size != loop.layout.size:
        raise ValueError(f"initial state has {vec.size} entries, expected {loop.layout.size}")
    # Raises for an infeasible start: s0 must lie inside every domain.
    obs0 = loop.observe(vec)

    rec = _Recorder(loop)
    rec.record(0.0, vec, obs0)
    if cfg.method == "rk4_fixed":
        exit_event, counts = _run_rk4(loop, vec, cfg, rec)
    else:
        exit_event, counts = _run_dp45(loop, vec, cfg, rec)

    metadata: dict[str, object] = {
        "method": cfg.method,
        "seed": seed,
        "m": loop.network.m,
        "rhs_evals": loop.rhs_evals,
        **counts,
    }
    traj = rec.build(exit_event, metadata)
    if exit_event is not None:
        log.warning("domain_exit", t=exit_event.t, kind=exit_event.kind, detail=exit_event.detail)
    log.info("integration_done", method=cfg.method, samples=len(traj), **counts)
    return traj


def _exit(t: float, exc: Exception) -> ExitEvent:
    kind = "algebraic" if isinstance(exc, AlgebraicInconsistencyError) else "domain"
    return ExitEvent(t=t, kind=kind, detail=str(exc))


def _run_rk4(
    loop: ClosedLoop, vec: np.ndarray, cfg: IntegratorConfig, rec: _Recorder
) -> tuple[ExitEvent | None, dict[str, int]]:
    n_steps = math.ceil(cfg.t_end / cfg.step - 1e-9)
    t = 0.0
    for k in range(1, n_steps + 1):
        h = min(cfg.step, cfg.t_end - t)
        try:
            vec = rk4_step(loop.rhs, t, vec, h)
            t = min(k * cfg.step, cfg.t_end)
            obs = loop.observe(vec)
        except _LEAVES_DOMAIN as exc:
            return _exit(t, exc), {"accepted": k - 1, "rejected": 0}
        if k % cfg.record_stride == 0 or k == n_steps:
            rec.record(t, vec, obs)
    return None, {"accepted": n_steps, "rejected": 0}


def _run_dp45(
    loop: ClosedLoop, vec: np.ndarray, cfg: IntegratorConfig, rec: _Recorder
) -> tuple[ExitEvent | None, dict[str, int]]:
    t = 0.0
    h = min(cfg.max_step, 1e-3 * cfg.t_end)
    h_min = _MIN_STEP_RATIO * cfg.t_end
    accepted = rejected = 0
    k1 = loop.rhs(t, vec)
    while t < cfg.t_end:
        h = min(h, cfg.t_end - t)
        try:
            y_new, err, k_last = dp45_step(loop.rhs, t, vec, h, k1)
        except _LEAVES_DOMAIN as exc:
            rejected += 1
            h *= 0.25
            if h < h_min:
                return _exit(t, exc), {"accepted": accepted, "rejected": rejected}
            continue

        norm = error_norm(err, vec, y_new, cfg.rel_tol, cfg.abs_tol)
        if norm <= 1.0:
            try:
                obs = loop.observe(y_new)
            except _LEAVES_DOMAIN as exc:
                return _exit(t + h, exc), {"accepted": accepted, "rejected": rejected}
            t = t + h if cfg.t_end - (t + h) > h_min else cfg.t_end
            vec, k1 = y_new, k_last
            accepted += 1
            if accepted % cfg.record_stride == 0 or t >= cfg.t_end:
                rec.record(t, vec, obs)
        else:
            rejected += 1
        h = min(h * step_factor(norm), cfg.max_step)
        if h < h_min and t < cfg.t_end:
            raise StiffnessError(f"step size {h:.3g} underflowed at t = {t:.6g}")
    return None, {"accepted": accepted, "rejected": rejected}
