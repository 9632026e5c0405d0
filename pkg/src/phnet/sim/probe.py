"""Empirical basin probing around an equilibrium.

Perturbations are drawn up front from one seeded generator, so the outcome
does not depend on how trials are scheduled across worker processes. A
probe explores; it does not certify a region of attraction.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from phnet.config.defaults import SETTLE_TOL, SETTLE_WINDOW
from phnet.config.models import IntegratorConfig
from phnet.control import ControllerSpec
from phnet.errors import (
    AlgebraicInconsistencyError,
    DomainViolationError,
    InfeasibleError,
    NoPreimageError,
    StiffnessError,
)
from phnet.network import NetworkSpec, ReducedState
from phnet.sim.closed_loop import ClosedLoop
from phnet.sim.monitors import settle
from phnet.sim.runner import integrate
from phnet.steadystate import Equilibrium
from phnet.utils.logging import get_logger
from phnet.utils.progress import probe_progress

log = get_logger(__name__)

_MAX_DRAWS = 1000


@dataclass(frozen=True)
class ProbeResult:
    radius: float
    trials: int
    seed: int
    successes: int
    outcomes: tuple[bool, ...] = field(default=())
    settle_times: tuple[float | None, ...] = field(default=())

    @property
    def fraction(self) -> float:
        return self.successes / self.trials

    def to_dict(self) -> dict[str, Any]:
        return {
            "radius": self.radius,
            "trials": self.trials,
            "seed": self.seed,
            "successes": self.successes,
            "fraction": self.fraction,
            "settle_times": list(self.settle_times),
        }


@dataclass(frozen=True)
class _Trial:
    spec: NetworkSpec
    controller: ControllerSpec
    s0: ReducedState
    cfg: IntegratorConfig
    y_star: np.ndarray
    tol: float
    window: float
    seed: int


_TRIAL_FAILURES = (
    StiffnessError,
    AlgebraicInconsistencyError,
    DomainViolationError,
    NoPreimageError,
)


def _run_trial(trial: _Trial) -> float | None:
    """Settle time of one start, or None when it fails to settle or the run breaks down."""
    try:
        traj = integrate(trial.spec, trial.controller, trial.s0, trial.cfg, seed=trial.seed)
    except _TRIAL_FAILURES as exc:
        log.debug("trial_failed", error=type(exc).__name__, detail=str(exc))
        return None
    if not traj.completed:
        return None
    return settle(traj, trial.y_star, trial.tol, trial.window)


def draw_perturbations(
    loop: ClosedLoop, center: np.ndarray, radius: float, trials: int, rng: np.random.Generator
) -> list[np.ndarray]:
    """Uniform draws from the max-norm ball around ``center`` that stay inside every domain."""
    starts: list[np.ndarray] = []
    for _ in range(trials):
        for _attempt in range(_MAX_DRAWS):
            candidate = center + rng.uniform(-radius, radius, size=center.shape)
            s = loop.layout.unpack(candidate)
            if loop.network.edge_domain.contains(s.eta) and all(
                loop.network.nodes[i].H.domain.contains(s.x1[sl])
                for i, sl in loop.layout.node_slices.items()
            ):
                starts.append(candidate)
                break
        else:
            raise ValueError(f"no interior perturbation found within radius {radius}")
    return starts


def basin_probe(
    spec: NetworkSpec,
    controller: ControllerSpec,
    equilibrium: Equilibrium | None,
    radius: float,
    trials: int,
    cfg: IntegratorConfig,
    seed: int = 0,
    workers: int = 1,
    tol: float = SETTLE_TOL,
    window: float = SETTLE_WINDOW,
    show_progress: bool = False,
) -> ProbeResult:
    """Fraction of perturbed starts around ``equilibrium`` whose outputs settle at y*."""
    if equilibrium is None:
        raise InfeasibleError("basin probe needs a feasible equilibrium")
    if radius <= 0 or trials < 1:
        raise ValueError("radius must be positive and trials at least 1")

    loop = ClosedLoop(spec, controller)
    center = loop.initial_vector(equilibrium.reduced(loop.network))
    rng = np.random.default_rng(seed)
    starts = draw_perturbations(loop, center, radius, trials, rng)
    jobs = [
        _Trial(
            spec=spec,
            controller=controller,
            s0=loop.layout.unpack(start),
            cfg=cfg,
            y_star=equilibrium.y_star,
            tol=tol,
            window=min(window, cfg.t_end),
            seed=seed,
        )
        for start in starts
    ]

    results: list[float | None] = []
    with probe_progress(radius, trials, enabled=show_progress) as record:
        if workers > 1:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                for outcome in pool.map(_run_trial, jobs):
                    results.append(outcome)
                    record(outcome is not None)
        else:
            for job in jobs:
                results.append(_run_trial(job))
                record(results[-1] is not None)

    outcomes = tuple(r is not None for r in results)
    result = ProbeResult(
        radius=radius,
        trials=trials,
        seed=seed,
        successes=sum(outcomes),
        outcomes=outcomes,
        settle_times=tuple(results),
    )
    log.info("basin_probe_done", radius=radius, trials=trials, fraction=result.fraction)
    return result
