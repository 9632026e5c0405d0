"""Edge Hamiltonians of the integrator edge dynamics."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from phnet.energy import Box, Hamiltonian
from phnet.errors import DomainViolationError, InvalidModelError


@dataclass(frozen=True, eq=False)
class EdgeBank:
    """Per-edge Hamiltonians H_e,k; every edge carries an m-dimensional state."""

    hamiltonians: tuple[Hamiltonian, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "hamiltonians", tuple(self.hamiltonians))
        dims = {h.dim for h in self.hamiltonians}
        if len(dims) > 1:
            raise InvalidModelError(f"edge Hamiltonians have mixed dimensions {sorted(dims)}")

    @classmethod
    def of(cls, hamiltonians: Sequence[Hamiltonian]) -> EdgeBank:
        return cls(hamiltonians=tuple(hamiltonians))

    def __len__(self) -> int:
        return len(self.hamiltonians)

    @property
    def m(self) -> int | None:
        return self.hamiltonians[0].dim if self.hamiltonians else None

    def split(self, eta: np.ndarray) -> np.ndarray:
        """Flat (M*m,) edge state as an (M, m) array."""
        m = self.m or 1
        return np.asarray(eta, dtype=np.float64).reshape(len(self), m)

    def gradients(self, eta: np.ndarray) -> np.ndarray:
        """grad H_e,k(eta_k) stacked as (M, m); domain errors carry the flat coordinate."""
        blocks = self.split(eta)
        out = np.empty_like(blocks)
        for k, h in enumerate(self.hamiltonians):
            try:
                out[k] = h.gradient(blocks[k])
            except DomainViolationError as exc:
                m = blocks.shape[1]
                raise DomainViolationError(
                    k * m + exc.coordinate, exc.value, exc.lower, exc.upper
                ) from exc
        return out

    def hessians(self, eta: np.ndarray) -> list[np.ndarray]:
        blocks = self.split(eta)
        return [h.hessian(blocks[k]) for k, h in enumerate(self.hamiltonians)]

    def value(self, eta: np.ndarray) -> float:
        blocks = self.split(eta)
        return float(sum(h.value(blocks[k]) for k, h in enumerate(self.hamiltonians)))

    def domain(self) -> Box:
        """Product box over all edges, flattened."""
        lower: list[float] = []
        upper: list[float] = []
        for h in self.hamiltonians:
            lower.extend(h.domain.lower)
            upper.extend(h.domain.upper)
        return Box(lower=tuple(lower), upper=tuple(upper))
