"""Steady-state result objects."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from phnet.network import NetworkSpec, ReducedState


@dataclass(frozen=True)
class Allocation:
    """Multiplier lambda and per-node optimal inputs u_i = Q_i^{-1} lambda."""

    lam: np.ndarray
    u_bar: dict[int, np.ndarray]
    constraint_residual: float = 0.0

    def cost(self, weights: dict[int, np.ndarray]) -> float:
        return 0.5 * sum(float(u @ weights[i] @ u) for i, u in self.u_bar.items())


@dataclass
class SteadyStateReport:
    y_star: np.ndarray
    feasible: bool
    eta_unique: bool
    eta_bar: np.ndarray | None = None
    lam: np.ndarray | None = None
    u_bar: dict[int, np.ndarray] | None = None
    residuals: dict[str, float] = field(default_factory=dict)
    iterations: int = 0
    mode: str = "free_inputs"
    reason: str = ""

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values(), default=0.0)

    def inputs(self, spec: NetworkSpec) -> np.ndarray:
        """u_bar as an (N, m) array, zero for uncontrolled nodes."""
        return spec.inputs_from(self.u_bar or {})

    def to_dict(self) -> dict[str, Any]:
        return {
            "y_star": self.y_star,
            "eta_bar": self.eta_bar,
            "lambda": self.lam,
            "u_bar": None
            if self.u_bar is None
            else {str(i + 1): u for i, u in sorted(self.u_bar.items())},
            "residuals": self.residuals,
            "feasible": self.feasible,
            "eta_unique": self.eta_unique,
            "iterations": self.iterations,
            "mode": self.mode,
            "reason": self.reason,
        }


@dataclass(frozen=True)
class Equilibrium:
    """A full steady state: node states, edge states, inputs and controller states."""

    x: tuple[np.ndarray, ...]
    eta: np.ndarray
    u: np.ndarray
    y_star: np.ndarray
    xi: np.ndarray = field(default_factory=lambda: np.zeros(0))

    def reduced(self, spec: NetworkSpec) -> ReducedState:
        layout = spec.layout
        x1 = layout.stack_nodes({i: self.x[i] for i in layout.node_slices})
        return ReducedState(eta=self.eta.copy(), x1=x1, xi=self.xi.copy())

    def with_controller(self, xi: np.ndarray) -> Equilibrium:
        return Equilibrium(x=self.x, eta=self.eta, u=self.u, y_star=self.y_star, xi=xi)

    def to_dict(self) -> dict[str, Any]:
        return {
            "x": {str(i + 1): x for i, x in enumerate(self.x)},
            "eta": self.eta,
            "u": self.u,
            "y_star": self.y_star,
            "xi": self.xi,
        }
