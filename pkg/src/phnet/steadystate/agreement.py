"""Closed-form agreement output and optimal input allocation."""

from __future__ import annotations

from collections.abc import Mapping

import numpy as np

from phnet.config.defaults import CONSTRAINT_TOL
from phnet.errors import InfeasibleError, InvalidModelError, UnsupportedConfigurationError
from phnet.network import NetworkSpec
from phnet.steadystate.report import Allocation
from phnet.utils.logging import get_logger

log = get_logger(__name__)


def agreement_output(spec: NetworkSpec, inputs: np.ndarray | None = None) -> np.ndarray:
    """y* = -(sum (J_i - R_i))^{-1} sum (delta_i + u_i); only defined when every G_i = I."""
    if not all(node.has_identity_port for node in spec.nodes):
        raise UnsupportedConfigurationError(
            "closed-form agreement output needs G_i = I on every node; supply y* instead"
        )
    u = spec.check_inputs(inputs)
    total_jr = sum(node.JR for node in spec.nodes)
    total_d = np.sum(spec.disturbances + u, axis=0)
    return -np.linalg.solve(total_jr, total_d)


def balance_offset(spec: NetworkSpec, y_star: np.ndarray) -> np.ndarray:
    """sum_i K_i^{-1} y* + sum_i delta_i; equals sum (J_i - R_i) y* + sum delta_i for G = I."""
    y_star = np.asarray(y_star, dtype=np.float64).reshape(spec.m)
    offset = np.sum(spec.disturbances, axis=0)
    for node in spec.nodes:
        offset = offset + node.port_map_inv @ y_star
    return offset


def _weights_for(spec: NetworkSpec, weights: Mapping[int, np.ndarray]) -> dict[int, np.ndarray]:
    controlled = spec.partition.controlled
    if not controlled:
        raise InfeasibleError("no controlled nodes to allocate inputs to")
    out: dict[int, np.ndarray] = {}
    for i in controlled:
        if i not in weights:
            raise InvalidModelError(f"missing dispatch weight Q for controlled node {i + 1}")
        Q = np.atleast_2d(np.asarray(weights[i], dtype=np.float64))
        if Q.shape != (spec.m, spec.m):
            raise InvalidModelError(f"Q for node {i + 1} has shape {Q.shape}, expected m x m")
        if not np.allclose(Q, Q.T) or np.min(np.linalg.eigvalsh(Q)) <= 0:
            raise InvalidModelError(f"Q for node {i + 1} is not symmetric positive definite")
        out[i] = Q
    return out


def lambda_optimal(
    spec: NetworkSpec, y_star: np.ndarray, weights: Mapping[int, np.ndarray]
) -> Allocation:
    """lambda = -(sum Q_i^{-1})^{-1} (sum K_i^{-1} y* + sum delta_i), u_i = Q_i^{-1} lambda."""
    Q = _weights_for(spec, weights)
    offset = balance_offset(spec, y_star)
    q_inv = {i: np.linalg.inv(q) for i, q in Q.items()}
    lam = -np.linalg.solve(sum(q_inv.values()), offset)
    u_bar = {i: qi @ lam for i, qi in q_inv.items()}
    residual = float(np.max(np.abs(offset + sum(u_bar.values()))))
    if residual > CONSTRAINT_TOL:
        log.warning("constraint_residual_high", residual=residual)
    log.debug("lambda_optimal", lam=lam.tolist(), residual=residual)
    return Allocation(lam=lam, u_bar=u_bar, constraint_residual=residual)


def qp_oracle(
    spec: NetworkSpec, y_star: np.ndarray, weights: Mapping[int, np.ndarray]
) -> Allocation:
    """Solve min 1/2 sum u_i^T Q_i u_i s.t. sum u_i = -offset by a direct KKT solve."""
    Q = _weights_for(spec, weights)
    nodes = sorted(Q)
    m = spec.m
    p = len(nodes)
    n_var = p * m

    kkt = np.zeros((n_var + m, n_var + m))
    rhs = np.zeros(n_var + m)
    for k, i in enumerate(nodes):
        block = slice(k * m, (k + 1) * m)
        kkt[block, block] = Q[i]
        kkt[n_var:, block] = np.eye(m)
        kkt[block, n_var:] = np.eye(m)
    offset = balance_offset(spec, y_star)
    rhs[n_var:] = -offset

    try:
        solution = np.linalg.solve(kkt, rhs)
    except np.linalg.LinAlgError as exc:
        raise InfeasibleError(f"KKT system is singular: {exc}") from exc

    u_bar = {i: solution[k * m : (k + 1) * m] for k, i in enumerate(nodes)}
    # Stationarity Q_i u_i + nu = 0 gives u_i = Q_i^{-1} (-nu).
    lam = -solution[n_var:]
    residual = float(np.max(np.abs(offset + sum(u_bar.values()))))
    return Allocation(lam=lam, u_bar=u_bar, constraint_residual=residual)
