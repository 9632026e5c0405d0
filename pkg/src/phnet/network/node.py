"""Single-node port-Hamiltonian data and its structural checks."""

from __future__ import annotations

from dataclasses import dataclass, replace
from functools import cached_property

import numpy as np

from phnet.config.defaults import SKEW_TOL
from phnet.energy import Hamiltonian
from phnet.errors import InvalidModelError
from phnet.graph import NodeClass


def skew_defect(J: np.ndarray) -> float:
    """Largest entry of |J + J^T|; zero for an exactly skew matrix."""
    J = np.atleast_2d(np.asarray(J, dtype=np.float64))
    return float(np.max(np.abs(J + J.T))) if J.size else 0.0


def dissipation_margin(R: np.ndarray) -> float:
    """Smallest eigenvalue of the symmetric part of R."""
    R = np.atleast_2d(np.asarray(R, dtype=np.float64))
    return float(np.min(np.linalg.eigvalsh(0.5 * (R + R.T))))


def column_rank(G: np.ndarray) -> int:
    return int(np.linalg.matrix_rank(np.atleast_2d(np.asarray(G, dtype=np.float64))))


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=np.float64)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class NodeSpec:
    """One node: x' = (J - R) grad H(x) + G (sigma + u + delta), y = G^T grad H(x)."""

    J: np.ndarray
    R: np.ndarray
    G: np.ndarray
    H: Hamiltonian
    node_class: NodeClass
    delta: np.ndarray

    def __post_init__(self) -> None:
        J = _frozen(np.atleast_2d(self.J))
        R = _frozen(np.atleast_2d(self.R))
        G = np.asarray(self.G, dtype=np.float64)
        G = _frozen(G.reshape(-1, 1) if G.ndim < 2 else G)
        object.__setattr__(self, "J", J)
        object.__setattr__(self, "R", R)
        object.__setattr__(self, "G", G)
        object.__setattr__(self, "node_class", NodeClass(self.node_class))

        n, m = G.shape
        delta = _frozen(np.atleast_1d(self.delta).reshape(-1))
        object.__setattr__(self, "delta", delta)
        if J.shape != (n, n) or R.shape != (n, n):
            raise InvalidModelError(
                f"J {J.shape} and R {R.shape} must be {n}x{n} to match G {G.shape}"
            )
        if self.H.dim != n:
            raise InvalidModelError(f"Hamiltonian dim {self.H.dim} does not match n = {n}")
        if delta.shape != (m,):
            raise InvalidModelError(f"delta has shape {delta.shape}, expected ({m},)")
        if m > n:
            raise InvalidModelError(f"port dimension m = {m} exceeds state dimension n = {n}")
        if (defect := skew_defect(J)) > SKEW_TOL:
            raise InvalidModelError(f"J is not skew-symmetric (|J + J^T| = {defect:.3g})")
        if (margin := dissipation_margin(R)) <= 0:
            raise InvalidModelError(f"R is not positive definite (min eigenvalue {margin:.3g})")
        if column_rank(G) != m:
            raise InvalidModelError(f"G does not have full column rank {m}")

    @property
    def n(self) -> int:
        return int(self.G.shape[0])

    @property
    def m(self) -> int:
        return int(self.G.shape[1])

    @cached_property
    def JR(self) -> np.ndarray:
        return self.J - self.R

    @cached_property
    def JR_inv(self) -> np.ndarray:
        return np.linalg.inv(self.JR)

    @cached_property
    def condition(self) -> float:
        return float(np.linalg.cond(self.JR))

    @cached_property
    def port_map(self) -> np.ndarray:
        """K = G^T (J - R)^{-1} G, negative definite since G has full column rank."""
        return self.G.T @ self.JR_inv @ self.G

    @cached_property
    def port_map_inv(self) -> np.ndarray:
        return np.linalg.inv(self.port_map)

    @property
    def has_identity_port(self) -> bool:
        return self.n == self.m and bool(np.array_equal(self.G, np.eye(self.n)))

    def solve_gradient(self, inflow: np.ndarray) -> np.ndarray:
        """Gradient w solving 0 = (J - R) w + G inflow."""
        return -self.JR_inv @ (self.G @ inflow)

    def with_class(self, node_class: NodeClass, delta: np.ndarray | None = None) -> NodeSpec:
        return replace(
            self,
            node_class=node_class,
            delta=self.delta if delta is None else np.asarray(delta, dtype=np.float64),
        )
