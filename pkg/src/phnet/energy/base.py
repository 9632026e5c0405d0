"""Hamiltonian interface and open-box convexity domains."""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np

from phnet.errors import DomainViolationError


@dataclass(frozen=True)
class Box:
    """Open box: per-coordinate open intervals (lower_k, upper_k), possibly infinite."""

    lower: tuple[float, ...]
    upper: tuple[float, ...]

    @classmethod
    def unbounded(cls, dim: int) -> Box:
        return cls(lower=(-np.inf,) * dim, upper=(np.inf,) * dim)

    @classmethod
    def symmetric(cls, dim: int, half_width: float) -> Box:
        return cls(lower=(-half_width,) * dim, upper=(half_width,) * dim)

    @property
    def dim(self) -> int:
        return len(self.lower)

    @property
    def is_bounded(self) -> bool:
        return bool(np.all(np.isfinite(self.lower)) and np.all(np.isfinite(self.upper)))

    def contains(self, z: np.ndarray) -> bool:
        z = np.asarray(z, dtype=np.float64)
        return bool(np.all(z > np.asarray(self.lower)) and np.all(z < np.asarray(self.upper)))

    def margin(self, z: np.ndarray) -> float:
        """Smallest distance from z to the boundary; negative outside, inf when unbounded."""
        z = np.asarray(z, dtype=np.float64)
        if z.size == 0:
            return float("inf")
        gaps = np.minimum(z - np.asarray(self.lower), np.asarray(self.upper) - z)
        return float(np.min(gaps))

    def require(self, z: np.ndarray) -> None:
        z = np.asarray(z, dtype=np.float64)
        lo = np.asarray(self.lower)
        hi = np.asarray(self.upper)
        bad = np.flatnonzero(~((z > lo) & (z < hi)))
        if bad.size:
            k = int(bad[0])
            raise DomainViolationError(k, float(z[k]), float(lo[k]), float(hi[k]))

    def shrink(self, factor: float) -> Box:
        """Scale finite bounds toward the box centre by ``factor``."""
        lo = np.asarray(self.lower)
        hi = np.asarray(self.upper)
        finite = np.isfinite(lo) & np.isfinite(hi)
        centre = np.where(finite, 0.5 * (lo + hi), 0.0)
        new_lo = np.where(finite, centre + factor * (lo - centre), lo)
        new_hi = np.where(finite, centre + factor * (hi - centre), hi)
        return Box(lower=tuple(map(float, new_lo)), upper=tuple(map(float, new_hi)))

    def project(self, z: np.ndarray) -> np.ndarray:
        return np.clip(z, np.asarray(self.lower), np.asarray(self.upper))


class Hamiltonian(ABC):
    """Strictly convex energy function on an open box.

    Subclasses implement the ``_value``/``_gradient``/``_hessian``/
    ``inverse_gradient`` kernels; the public methods check the domain first.
    """

    family: str = ""

    def __init__(self, dim: int, domain: Box | None = None) -> None:
        if dim < 1:
            raise ValueError(f"Hamiltonian dimension must be positive, got {dim}")
        self.dim = dim
        self.domain = domain if domain is not None else Box.unbounded(dim)
        if self.domain.dim != dim:
            raise ValueError(f"domain has dim {self.domain.dim}, expected {dim}")

    def _check(self, z: np.ndarray) -> np.ndarray:
        z = np.asarray(z, dtype=np.float64).reshape(-1)
        if z.shape != (self.dim,):
            raise ValueError(f"expected vector of length {self.dim}, got {z.shape}")
        self.domain.require(z)
        return z

    def value(self, z: np.ndarray) -> float:
        return self._value(self._check(z))

    def gradient(self, z: np.ndarray) -> np.ndarray:
        return self._gradient(self._check(z))

    def hessian(self, z: np.ndarray) -> np.ndarray:
        return self._hessian(self._check(z))

    @abstractmethod
    def _value(self, z: np.ndarray) -> float: ...

    @abstractmethod
    def _gradient(self, z: np.ndarray) -> np.ndarray: ...

    @abstractmethod
    def _hessian(self, z: np.ndarray) -> np.ndarray: ...

    @abstractmethod
    def inverse_gradient(self, w: np.ndarray) -> np.ndarray:
        """Return z in the domain with gradient(z) = w, or raise NoPreimageError."""

    @abstractmethod
    def to_dict(self) -> dict[str, object]:
        """Serializable parameters, readable by ``build_hamiltonian``."""


def bregman(h: Hamiltonian, z: np.ndarray, z_ref: np.ndarray) -> float:
    """Bregman distance H(z) - H(z_ref) - grad H(z_ref)^T (z - z_ref)."""
    z = h._check(z)
    z_ref = h._check(z_ref)
    value = h._value(z) - h._value(z_ref) - float(h._gradient(z_ref) @ (z - z_ref))
    # Rounding can leave tiny negatives near z_ref.
    return max(value, 0.0)
