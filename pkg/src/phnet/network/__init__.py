"""Network assembly and closed-network evaluation."""

from phnet.network.dynamics import (
    Elimination,
    NetworkEvaluation,
    eliminate_algebraic,
    evaluate,
    interconnection,
    outputs,
    power_balance_residual,
    total_energy,
    vector_field,
)
from phnet.network.edges import EdgeBank
from phnet.network.node import NodeSpec, column_rank, dissipation_margin, skew_defect
from phnet.network.spec import NetworkSpec, ReducedState, StateLayout

__all__ = [
    "EdgeBank",
    "Elimination",
    "NetworkEvaluation",
    "NetworkSpec",
    "NodeSpec",
    "ReducedState",
    "StateLayout",
    "column_rank",
    "dissipation_margin",
    "eliminate_algebraic",
    "evaluate",
    "interconnection",
    "outputs",
    "power_balance_residual",
    "skew_defect",
    "total_energy",
    "vector_field",
]
