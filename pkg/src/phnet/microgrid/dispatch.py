"""Optimal steady-state power dispatch for a microgrid."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import numpy as np

from phnet.config.defaults import DOMAIN_SHRINK, FEASIBILITY_TOL, NEWTON_MAX_ITER
from phnet.errors import InfeasibleError
from phnet.microgrid.builder import build
from phnet.microgrid.config import GridConfig
from phnet.steadystate import SteadyStateReport, optimal_report, qp_oracle
from phnet.utils.logging import get_logger

log = get_logger(__name__)


@dataclass
class DispatchReport:
    lam: float
    u_bar: dict[int, float]
    line_flows: list[float]
    eta_bar: list[float]
    feasible: bool
    binding_line: int | None
    binding_ratio: float
    qp_deviation: float
    frozen: dict[int, float] = field(default_factory=dict)
    residuals: dict[str, float] = field(default_factory=dict)
    reason: str = ""
    steady_state: SteadyStateReport | None = field(default=None, repr=False)

    @property
    def total_input(self) -> float:
        return float(sum(self.u_bar.values()))

    def to_dict(self) -> dict[str, Any]:
        return {
            "lambda": self.lam,
            "u_bar": {str(b): v for b, v in sorted(self.u_bar.items())},
            "line_flows": self.line_flows,
            "eta_bar": self.eta_bar,
            "feasible": self.feasible,
            "binding_line": self.binding_line,
            "binding_ratio": self.binding_ratio,
            "qp_deviation": self.qp_deviation,
            "frozen": {str(b): v for b, v in sorted(self.frozen.items())},
            "residuals": self.residuals,
            "reason": self.reason,
        }


def dispatch(
    cfg: GridConfig,
    tol: float = FEASIBILITY_TOL,
    max_iter: int = NEWTON_MAX_ITER,
    shrink: float = DOMAIN_SHRINK,
) -> DispatchReport:
    """lambda, u_i = lambda / q_i and steady line flows at zero frequency deviation."""
    network, controller = build(cfg)
    if not controller.nodes:
        raise InfeasibleError("grid has no controlled buses to dispatch")
    weights = controller.weight_map()
    y_star = np.zeros(1)
    report = optimal_report(network, y_star, weights, tol=tol, max_iter=max_iter, shrink=shrink)
    oracle = qp_oracle(network, y_star, weights)
    assert report.u_bar is not None and report.lam is not None and report.eta_bar is not None
    deviation = max(
        float(np.max(np.abs(report.u_bar[i] - oracle.u_bar[i]))) for i in controller.nodes
    )

    gammas = np.array([line.gamma for line in cfg.lines])
    eta = report.eta_bar
    ratios = np.abs(np.sin(eta))
    binding = int(np.argmax(ratios)) + 1 if eta.size else None
    result = DispatchReport(
        lam=float(report.lam[0]),
        u_bar={i + 1: float(report.u_bar[i][0]) for i in controller.nodes},
        line_flows=(gammas * np.sin(eta)).tolist(),
        eta_bar=eta.tolist(),
        feasible=report.feasible,
        binding_line=binding,
        binding_ratio=float(np.max(ratios)) if eta.size else 0.0,
        qp_deviation=deviation,
        frozen=dict(cfg.failed),
        residuals=dict(report.residuals),
        reason=report.reason,
        steady_state=report,
    )
    if report.feasible:
        log.info("dispatch_solved", lam=result.lam, binding_line=binding)
    else:
        log.warning("dispatch_infeasible", binding_line=binding, reason=report.reason)
    return result
