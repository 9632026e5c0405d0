"""Numerical hygiene checks run by ``phnet validate`` on a scenario's own objects."""

from __future__ import annotations

from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from phnet.config.defaults import (
    CONDITION_WARN,
    ELIMINATION_TOL,
    GRADIENT_FD_RTOL,
    GRADIENT_FD_STEP,
    SKEW_TOL,
)
from phnet.control import ControllerSpec, controller_inputs
from phnet.energy import Box, Hamiltonian, bregman
from phnet.network import (
    NetworkSpec,
    ReducedState,
    column_rank,
    dissipation_margin,
    eliminate_algebraic,
    power_balance_residual,
    skew_defect,
    vector_field,
)
from phnet.scenario.build import as_matrix
from phnet.scenario.schema import NodeEntry
from phnet.steadystate import SteadyStateReport
from phnet.utils.logging import get_logger

log = get_logger(__name__)

INVERSE_ROUND_TRIP_TOL = 1e-10
POWER_BALANCE_TOL = 1e-8
UNIQUENESS_TOL = 1e-7


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    measured: float
    threshold: float
    detail: str = ""

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "passed": self.passed,
            "measured": self.measured,
            "threshold": self.threshold,
            "detail": self.detail,
        }


@dataclass
class ValidationReport:
    checks: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def add(self, check: CheckResult) -> None:
        self.checks.append(check)
        if not check.passed:
            log.warning("check_failed", check=check.name, measured=check.measured)

    def to_dict(self) -> dict[str, Any]:
        return {"passed": self.passed, "checks": [c.to_dict() for c in self.checks]}


def structural_checks(entries: Sequence[NodeEntry]) -> list[CheckResult]:
    """Skew/PD/rank checks on raw node matrices, before any object is built."""
    skew: list[float] = []
    margin: list[float] = []
    rank_ok = True
    detail: list[str] = []
    for k, entry in enumerate(entries):
        J, R, G = as_matrix(entry.J), as_matrix(entry.R), as_matrix(entry.G)
        skew.append(skew_defect(J))
        margin.append(dissipation_margin(R))
        if column_rank(G) != G.shape[1]:
            rank_ok = False
            detail.append(f"node {k + 1}: rank(G) = {column_rank(G)} < {G.shape[1]}")
    worst_skew = max(skew, default=0.0)
    worst_margin = min(margin, default=1.0)
    return [
        CheckResult(
            "skew_symmetric_J",
            worst_skew <= SKEW_TOL,
            worst_skew,
            SKEW_TOL,
            f"node {int(np.argmax(skew)) + 1}" if worst_skew > SKEW_TOL else "",
        ),
        CheckResult(
            "positive_definite_R",
            worst_margin > 0,
            worst_margin,
            0.0,
            f"node {int(np.argmin(margin)) + 1}" if worst_margin <= 0 else "",
        ),
        CheckResult("full_rank_G", rank_ok, 0.0 if rank_ok else 1.0, 0.0, "; ".join(detail)),
    ]


def sample_interior(box: Box, rng: np.random.Generator, scale: float = 2.0) -> np.ndarray:
    """A point well inside ``box``: uniform in its 90% core, normal where unbounded."""
    lo = np.asarray(box.lower)
    hi = np.asarray(box.upper)
    z = rng.normal(scale=scale, size=box.dim)
    bounded = np.isfinite(lo) & np.isfinite(hi)
    core = box.shrink(0.9)
    z[bounded] = rng.uniform(np.asarray(core.lower)[bounded], np.asarray(core.upper)[bounded])
    # Half-bounded coordinates: stay on the open side.
    below = np.isfinite(lo) & ~np.isfinite(hi)
    above = ~np.isfinite(lo) & np.isfinite(hi)
    z[below] = lo[below] + np.abs(z[below]) + 0.1
    z[above] = hi[above] - np.abs(z[above]) - 0.1
    return z


def finite_difference_gradient(h: Hamiltonian, z: np.ndarray, step: float) -> np.ndarray:
    g = np.empty(h.dim)
    for k in range(h.dim):
        e = np.zeros(h.dim)
        e[k] = step
        g[k] = (h.value(z + e) - h.value(z - e)) / (2 * step)
    return g


def _per_hamiltonian(
    hams: Sequence[Hamiltonian],
    samples: int,
    rng: np.random.Generator,
    measure: Callable[[Hamiltonian, np.random.Generator], float],
) -> float:
    worst = 0.0
    for s in range(samples):
        worst = max(worst, measure(hams[s % len(hams)], rng))
    return worst


def hamiltonian_checks(
    hams: Sequence[Hamiltonian], rng: np.random.Generator, samples: int = 100
) -> list[CheckResult]:
    if not hams:
        return []

    def fd_error(h: Hamiltonian, r: np.random.Generator) -> float:
        z = sample_interior(h.domain, r)
        g = h.gradient(z)
        fd = finite_difference_gradient(h, z, GRADIENT_FD_STEP)
        return float(np.max(np.abs(g - fd)) / max(float(np.max(np.abs(g))), 1.0))

    def round_trip(h: Hamiltonian, r: np.random.Generator) -> float:
        z = sample_interior(h.domain, r)
        return float(np.max(np.abs(h.inverse_gradient(h.gradient(z)) - z)))

    nonpositive = 0
    smallest = np.inf
    for s in range(samples):
        h = hams[s % len(hams)]
        z = sample_interior(h.domain, rng)
        z_ref = sample_interior(h.domain, rng)
        value = bregman(h, z, z_ref)
        smallest = min(smallest, value)
        if not value > 0:
            nonpositive += 1

    fd = _per_hamiltonian(hams, samples, rng, fd_error)
    rt = _per_hamiltonian(hams, samples, rng, round_trip)
    return [
        CheckResult("gradient_finite_difference", fd < GRADIENT_FD_RTOL, fd, GRADIENT_FD_RTOL),
        CheckResult(
            "bregman_positive",
            nonpositive == 0,
            float(smallest),
            0.0,
            f"{nonpositive} of {samples} pairs not positive" if nonpositive else "",
        ),
        CheckResult(
            "inverse_gradient_round_trip",
            rt <= INVERSE_ROUND_TRIP_TOL,
            rt,
            INVERSE_ROUND_TRIP_TOL,
        ),
    ]


def dissipation_sign_check(
    network: NetworkSpec, rng: np.random.Generator, samples: int = 100
) -> CheckResult:
    """z^T (J - R) z < 0 and z^T (J - R)^{-1} z < 0 on random nonzero z."""
    worst = -np.inf
    for s in range(samples):
        node = network.nodes[s % network.num_nodes]
        z = rng.normal(size=node.n)
        worst = max(worst, float(z @ node.JR @ z), float(z @ node.JR_inv @ z))
    return CheckResult("dissipation_sign", worst < 0, float(worst), 0.0)


def conditioning_check(network: NetworkSpec) -> CheckResult:
    cond = max(node.condition for node in network.nodes)
    return CheckResult("condition_J_minus_R", cond <= CONDITION_WARN, cond, CONDITION_WARN)


def state_checks(
    network: NetworkSpec, controller: ControllerSpec, s0: ReducedState
) -> list[CheckResult]:
    """Elimination residual and, for pure-ODE networks, the power balance at ``s0``."""
    xi = s0.xi if s0.xi.size else controller.initial_state()
    u = network.inputs_from(controller_inputs(controller, xi))
    state = ReducedState(eta=s0.eta, x1=s0.x1, xi=xi)
    results: list[CheckResult] = []
    if network.partition.algebraic:
        elim = eliminate_algebraic(network, s0.eta, u)
        results.append(
            CheckResult(
                "elimination_residual",
                elim.residual <= ELIMINATION_TOL,
                elim.residual,
                ELIMINATION_TOL,
            )
        )
    else:
        rate = vector_field(network, state, u)
        residual = power_balance_residual(network, state, u, rate)
        results.append(
            CheckResult("power_balance", residual < POWER_BALANCE_TOL, residual, POWER_BALANCE_TOL)
        )
    return results


def validate_network(
    network: NetworkSpec,
    controller: ControllerSpec,
    s0: ReducedState,
    rng: np.random.Generator,
    samples: int = 100,
) -> ValidationReport:
    report = ValidationReport()
    node_hams = [node.H for node in network.nodes]
    edge_hams = list(network.edges.hamiltonians)
    for check in hamiltonian_checks(node_hams + edge_hams, rng, samples):
        report.add(check)
    report.add(dissipation_sign_check(network, rng, samples))
    report.add(conditioning_check(network))
    for check in state_checks(network, controller, s0):
        report.add(check)
    return report


def uniqueness_check(
    solve: Callable[[np.ndarray], SteadyStateReport],
    reference: SteadyStateReport,
    rng: np.random.Generator,
    trials: int = 10,
    spread: float = 0.5,
) -> CheckResult:
    """Re-solve from perturbed eta guesses; on a tree every solve must land on the same eta."""
    assert reference.eta_bar is not None
    worst = 0.0
    misses = 0
    for _ in range(trials):
        guess = reference.eta_bar + rng.uniform(-spread, spread, size=reference.eta_bar.shape)
        report = solve(guess)
        if not report.feasible or report.eta_bar is None:
            misses += 1
            continue
        worst = max(worst, float(np.max(np.abs(report.eta_bar - reference.eta_bar), initial=0.0)))
    return CheckResult(
        "eta_unique_on_tree",
        misses == 0 and worst <= UNIQUENESS_TOL,
        worst,
        UNIQUENESS_TOL,
        f"{misses} of {trials} solves failed" if misses else "",
    )
