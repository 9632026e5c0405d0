"""Damped Gauss-Newton solve of the steady-state balance equations."""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass

import numpy as np

from phnet.config.defaults import (
    DOMAIN_SHRINK,
    EQUILIBRIUM_DRIFT_TOL,
    FEASIBILITY_TOL,
    NEWTON_ARMIJO,
    NEWTON_MAX_ITER,
    NEWTON_MIN_STEP,
)
from phnet.errors import InfeasibleError, NoPreimageError
from phnet.graph import NodeClass, is_acyclic, row_block
from phnet.network import NetworkSpec, evaluate, interconnection
from phnet.steadystate.agreement import lambda_optimal
from phnet.steadystate.report import Equilibrium, SteadyStateReport
from phnet.utils.logging import get_logger

log = get_logger(__name__)


@dataclass(frozen=True)
class _Unknowns:
    """Index bookkeeping for z = (eta, u of the free nodes)."""

    eta_size: int
    free_nodes: tuple[int, ...]
    m: int

    @property
    def size(self) -> int:
        return self.eta_size + len(self.free_nodes) * self.m

    def split(self, z: np.ndarray) -> tuple[np.ndarray, dict[int, np.ndarray]]:
        eta = z[: self.eta_size]
        u = {
            i: z[self.eta_size + k * self.m : self.eta_size + (k + 1) * self.m]
            for k, i in enumerate(self.free_nodes)
        }
        return eta, u


def _balance(
    spec: NetworkSpec, eta: np.ndarray, u: np.ndarray, y_star: np.ndarray
) -> np.ndarray:
    """Per-node residual sigma_i + u_i + delta_i + K_i^{-1} y*, shape (N, m)."""
    _, sigma = interconnection(spec, eta)
    offset = np.stack([node.port_map_inv @ y_star for node in spec.nodes])
    return sigma + u + spec.disturbances + offset


def _jacobian(spec: NetworkSpec, unknowns: _Unknowns, eta: np.ndarray) -> np.ndarray:
    m = spec.m
    jac = np.zeros((spec.num_nodes * m, unknowns.size))
    for k, hess in enumerate(spec.edges.hessians(eta)):
        cols = slice(k * m, (k + 1) * m)
        for i in np.flatnonzero(spec.B[:, k]):
            jac[i * m : (i + 1) * m, cols] -= spec.B[i, k] * hess
    for k, i in enumerate(unknowns.free_nodes):
        cols = slice(unknowns.eta_size + k * m, unknowns.eta_size + (k + 1) * m)
        jac[i * m : (i + 1) * m, cols] = np.eye(m)
    return jac


def _group_residuals(spec: NetworkSpec, r: np.ndarray) -> dict[str, float]:
    out: dict[str, float] = {}
    for cls in NodeClass:
        block = row_block(r, spec.partition, cls)
        out[f"balance_{cls.value}"] = float(np.max(np.abs(block), initial=0.0))
    return out


def solve_feasibility(
    spec: NetworkSpec,
    y_star: np.ndarray,
    u_bar: Mapping[int, np.ndarray] | None = None,
    eta0: np.ndarray | None = None,
    tol: float = FEASIBILITY_TOL,
    max_iter: int = NEWTON_MAX_ITER,
    shrink: float = DOMAIN_SHRINK,
) -> SteadyStateReport:
    """Find eta (and free inputs when ``u_bar`` is None) balancing every node at y*.

    With ``u_bar`` given the controlled inputs are fixed; otherwise they are
    unknowns of the solve. Stagnation yields an infeasible report, not an error.
    """
    y_star = np.asarray(y_star, dtype=np.float64).reshape(spec.m)
    m = spec.m
    fixed = u_bar is not None
    unknowns = _Unknowns(
        eta_size=spec.num_edges * m,
        free_nodes=() if fixed else spec.partition.controlled,
        m=m,
    )
    base_u = spec.inputs_from(dict(u_bar)) if u_bar is not None else spec.zero_inputs()
    box = spec.edge_domain.shrink(shrink)

    z = np.zeros(unknowns.size)
    if eta0 is not None:
        z[: unknowns.eta_size] = np.asarray(eta0, dtype=np.float64).reshape(-1)
    z[: unknowns.eta_size] = box.project(z[: unknowns.eta_size])

    def residual(zz: np.ndarray) -> np.ndarray:
        eta, free = unknowns.split(zz)
        u = base_u.copy()
        for i, v in free.items():
            u[i] = v
        return _balance(spec, eta, u, y_star)

    r = residual(z)
    phi = 0.5 * float(np.sum(r**2))
    iterations = 0
    reason = ""
    while float(np.max(np.abs(r), initial=0.0)) > tol:
        if unknowns.size == 0:
            reason = "no unknowns to balance the residual"
            break
        if iterations >= max_iter:
            reason = f"no convergence in {max_iter} iterations"
            break
        iterations += 1
        jac = _jacobian(spec, unknowns, z[: unknowns.eta_size])
        flat = r.reshape(-1)
        step, *_ = np.linalg.lstsq(jac, -flat, rcond=None)
        slope = float(flat @ (jac @ step))
        if slope >= 0:
            step = -(jac.T @ flat)
            slope = -float(step @ step)

        alpha = 1.0
        while True:
            trial = z + alpha * step
            trial[: unknowns.eta_size] = box.project(trial[: unknowns.eta_size])
            r_trial = residual(trial)
            phi_trial = 0.5 * float(np.sum(r_trial**2))
            if phi_trial <= phi + NEWTON_ARMIJO * alpha * slope:
                break
            alpha *= 0.5
            if alpha * float(np.max(np.abs(step))) < NEWTON_MIN_STEP:
                break
        if alpha * float(np.max(np.abs(step))) < NEWTON_MIN_STEP or phi_trial >= phi:
            reason = "newton stagnation"
            break
        z, r, phi = trial, r_trial, phi_trial

    eta, free = unknowns.split(z)
    u_final = {i: base_u[i].copy() for i in spec.partition.controlled}
    u_final.update({i: v.copy() for i, v in free.items()})
    residuals = _group_residuals(spec, r)
    feasible = not reason and spec.edge_domain.contains(eta)

    if feasible:
        try:
            _node_states(spec, eta, spec.inputs_from(u_final))
        except NoPreimageError as exc:
            feasible = False
            reason = f"no node state for y*: {exc}"

    report = SteadyStateReport(
        y_star=y_star,
        feasible=feasible,
        eta_unique=is_acyclic(spec.graph),
        eta_bar=eta.copy(),
        u_bar=u_final,
        residuals=residuals,
        iterations=iterations,
        mode="fixed_inputs" if fixed else "free_inputs",
        reason=reason,
    )
    if feasible:
        log.info("feasibility_solved", iterations=iterations, residual=report.max_residual)
    else:
        log.warning(
            "feasibility_failed",
            iterations=iterations,
            residual=report.max_residual,
            reason=reason,
        )
    return report


def optimal_report(
    spec: NetworkSpec,
    y_star: np.ndarray,
    weights: Mapping[int, np.ndarray],
    tol: float = FEASIBILITY_TOL,
    max_iter: int = NEWTON_MAX_ITER,
    eta0: np.ndarray | None = None,
    shrink: float = DOMAIN_SHRINK,
) -> SteadyStateReport:
    """Feasibility with the inputs fixed at the optimal allocation."""
    allocation = lambda_optimal(spec, y_star, weights)
    report = solve_feasibility(
        spec,
        y_star,
        u_bar=allocation.u_bar,
        eta0=eta0,
        tol=tol,
        max_iter=max_iter,
        shrink=shrink,
    )
    report.lam = allocation.lam
    report.residuals["constraint"] = allocation.constraint_residual
    return report


def _node_states(spec: NetworkSpec, eta: np.ndarray, u: np.ndarray) -> list[np.ndarray]:
    """States x_i with grad H_i(x_i) solving each node's steady equation."""
    _, sigma = interconnection(spec, eta)
    states = []
    for i, node in enumerate(spec.nodes):
        w = node.solve_gradient(sigma[i] + u[i] + node.delta)
        states.append(node.H.inverse_gradient(w))
    return states


def equilibrium_states(
    spec: NetworkSpec, report: SteadyStateReport, drift_tol: float | None = None
) -> Equilibrium:
    """Recover x for every node from a feasible report.

    Raises NoPreimageError when a node has no state for its output and
    InfeasibleError when the recovered point is not at rest. ``drift_tol``
    defaults to the larger of EQUILIBRIUM_DRIFT_TOL and 100x the report residual.
    """
    if not report.feasible or report.eta_bar is None:
        raise InfeasibleError(f"report is not feasible: {report.reason or 'residual too large'}")
    u = report.inputs(spec)
    states = _node_states(spec, report.eta_bar, u)
    eq = Equilibrium(x=tuple(states), eta=report.eta_bar.copy(), u=u, y_star=report.y_star)

    ev = evaluate(spec, eq.reduced(spec), u)
    drift = max(
        float(np.max(np.abs(ev.eta_dot), initial=0.0)),
        float(np.max(np.abs(ev.x1_dot), initial=0.0)),
    )
    limit = drift_tol if drift_tol is not None else max(
        EQUILIBRIUM_DRIFT_TOL, 100 * report.max_residual
    )
    if drift > limit:
        raise InfeasibleError(f"equilibrium drift {drift:.3g} exceeds {limit:g}")
    log.debug("equilibrium_recovered", drift=drift)
    return eq
