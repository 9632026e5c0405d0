"""Agreement outputs, optimal allocation and feasibility of steady states."""

from phnet.steadystate.agreement import (
    agreement_output,
    balance_offset,
    lambda_optimal,
    qp_oracle,
)
from phnet.steadystate.feasibility import equilibrium_states, optimal_report, solve_feasibility
from phnet.steadystate.report import Allocation, Equilibrium, SteadyStateReport

__all__ = [
    "Allocation",
    "Equilibrium",
    "SteadyStateReport",
    "agreement_output",
    "balance_offset",
    "equilibrium_states",
    "lambda_optimal",
    "optimal_report",
    "qp_oracle",
    "solve_feasibility",
]
