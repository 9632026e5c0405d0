"""Closed-network evaluation: algebraic elimination, vector field, outputs."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from phnet.errors import (
    AlgebraicInconsistencyError,
    NoPreimageError,
    UnsupportedConfigurationError,
)
from phnet.network.spec import NetworkSpec, ReducedState


@dataclass(frozen=True)
class Elimination:
    """Solved algebraic nodes: gradients, recovered states and equation residual."""

    gradients: dict[int, np.ndarray]
    states: dict[int, np.ndarray]
    residual: float


@dataclass(frozen=True)
class NetworkEvaluation:
    """Everything one right-hand-side evaluation produces."""

    sigma: np.ndarray
    gradients: tuple[np.ndarray, ...]
    states: tuple[np.ndarray, ...]
    y: np.ndarray
    eta_dot: np.ndarray
    x1_dot: np.ndarray
    edge_gradients: np.ndarray
    alg_residual: float


def interconnection(spec: NetworkSpec, eta: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Edge gradients mu (M, m) and node port signals sigma = -(B (x) I) mu as (N, m)."""
    mu = spec.edges.gradients(eta)
    return mu, -(spec.B @ mu)


def eliminate_algebraic(
    spec: NetworkSpec, eta: np.ndarray, u: np.ndarray | None = None
) -> Elimination:
    """Solve 0 = (J - R) grad H(x) + G (sigma + u + delta) for every algebraic node."""
    u = spec.check_inputs(u)
    _, sigma = interconnection(spec, eta)
    return _eliminate(spec, sigma, u)


def _eliminate(spec: NetworkSpec, sigma: np.ndarray, u: np.ndarray) -> Elimination:
    gradients: dict[int, np.ndarray] = {}
    states: dict[int, np.ndarray] = {}
    residual = 0.0
    for i in spec.partition.algebraic:
        node = spec.nodes[i]
        inflow = sigma[i] + u[i] + node.delta
        w = node.solve_gradient(inflow)
        try:
            x = node.H.inverse_gradient(w)
        except NoPreimageError as exc:
            raise AlgebraicInconsistencyError(i + 1, str(exc)) from exc
        r = node.JR @ node.H.gradient(x) + node.G @ inflow
        residual = max(residual, float(np.max(np.abs(r))))
        gradients[i] = w
        states[i] = x
    return Elimination(gradients=gradients, states=states, residual=residual)


def evaluate(spec: NetworkSpec, s: ReducedState, u: np.ndarray | None = None) -> NetworkEvaluation:
    u = spec.check_inputs(u)
    mu, sigma = interconnection(spec, s.eta)
    elim = _eliminate(spec, sigma, u)
    layout = spec.layout

    gradients: list[np.ndarray] = []
    states: list[np.ndarray] = []
    y = np.empty((spec.num_nodes, spec.m))
    x1_dot = np.empty(layout.x1_size)
    for i, node in enumerate(spec.nodes):
        if i in elim.gradients:
            w = elim.gradients[i]
            x = elim.states[i]
        else:
            x = layout.node_state(s, i)
            w = node.H.gradient(x)
            x1_dot[layout.node_slices[i]] = node.JR @ w + node.G @ (sigma[i] + u[i] + node.delta)
        gradients.append(w)
        states.append(x)
        y[i] = node.G.T @ w

    eta_dot = (spec.B.T @ y).reshape(-1)
    return NetworkEvaluation(
        sigma=sigma,
        gradients=tuple(gradients),
        states=tuple(states),
        y=y,
        eta_dot=eta_dot,
        x1_dot=x1_dot,
        edge_gradients=mu,
        alg_residual=elim.residual,
    )


def vector_field(spec: NetworkSpec, s: ReducedState, u: np.ndarray | None = None) -> ReducedState:
    """Time derivative of (eta, x1); the controller block is left at zero."""
    ev = evaluate(spec, s, u)
    return ReducedState(eta=ev.eta_dot, x1=ev.x1_dot, xi=np.zeros_like(s.xi))


def outputs(spec: NetworkSpec, s: ReducedState, u: np.ndarray | None = None) -> np.ndarray:
    """Stacked outputs y_i = G_i^T grad H_i(x_i) as an (N, m) array."""
    return evaluate(spec, s, u).y


def total_energy(spec: NetworkSpec, s: ReducedState) -> float:
    layout = spec.layout
    nodes = sum(spec.nodes[i].H.value(layout.node_state(s, i)) for i in layout.node_slices)
    return float(nodes) + spec.edges.value(s.eta)


def power_balance_residual(
    spec: NetworkSpec, s: ReducedState, u: np.ndarray | None, s_dot: ReducedState
) -> float:
    """|dH/dt - (-sum w^T R w + sum y^T (u + delta))| for networks without algebraic nodes."""
    if spec.partition.algebraic:
        raise UnsupportedConfigurationError(
            "power balance holds exactly only for networks without algebraic nodes"
        )
    u = spec.check_inputs(u)
    ev = evaluate(spec, s, u)
    layout = spec.layout

    h_dot = float(np.sum(ev.edge_gradients.reshape(-1) * s_dot.eta))
    supplied = 0.0
    for i, node in enumerate(spec.nodes):
        w = ev.gradients[i]
        h_dot += float(w @ s_dot.x1[layout.node_slices[i]])
        supplied += -float(w @ node.R @ w) + float(ev.y[i] @ (u[i] + node.delta))
    return abs(h_dot - supplied)
