"""Network plus controller as one ODE on the flat (eta, x1, xi) vector."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from phnet.control import ControllerSpec, controller_inputs, controller_rates, resolve
from phnet.network import NetworkEvaluation, NetworkSpec, ReducedState, StateLayout, evaluate


@dataclass(frozen=True)
class Observation:
    """Signals recorded at one sample."""

    y: np.ndarray
    u: np.ndarray
    alg_residual: float
    domain_margin: float


class ClosedLoop:
    """Resolved network and controller with the integrator right-hand side."""

    def __init__(self, network: NetworkSpec, controller: ControllerSpec) -> None:
        self.network, self.controller = resolve(controller, network)
        self.layout: StateLayout = self.network.layout.with_controller(
            self.controller.state_size
        )
        self.rhs_evals = 0

    def initial_vector(self, s0: ReducedState) -> np.ndarray:
        """Flatten ``s0``; an empty xi falls back to the controller's own xi0."""
        xi = s0.xi
        if xi.size == 0 and self.controller.state_size:
            xi = self.controller.initial_state()
        return ReducedState(eta=s0.eta, x1=s0.x1, xi=xi).pack().astype(np.float64)

    def _evaluate(self, vec: np.ndarray) -> tuple[ReducedState, np.ndarray, NetworkEvaluation]:
        s = self.layout.unpack(vec)
        u = self.network.inputs_from(controller_inputs(self.controller, s.xi))
        return s, u, evaluate(self.network, s, u)

    def rhs(self, t: float, vec: np.ndarray) -> np.ndarray:
        self.rhs_evals += 1
        s, _, ev = self._evaluate(vec)
        xi_dot, _ = controller_rates(self.controller, s.xi, ev.y)
        return np.concatenate([ev.eta_dot, ev.x1_dot, xi_dot])

    def observe(self, vec: np.ndarray) -> Observation:
        s, u, ev = self._evaluate(vec)
        margin = self.network.edge_domain.margin(s.eta)
        for i, sl in self.layout.node_slices.items():
            margin = min(margin, self.network.nodes[i].H.domain.margin(s.x1[sl]))
        return Observation(
            y=ev.y.reshape(-1),
            u=u.reshape(-1),
            alg_residual=ev.alg_residual,
            domain_margin=margin,
        )
