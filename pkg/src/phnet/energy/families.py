"""Built-in Hamiltonian families: quadratic and negative cosine."""

from __future__ import annotations

import numpy as np

from phnet.energy.base import Box, Hamiltonian
from phnet.errors import InvalidModelError, NoPreimageError


class QuadraticHamiltonian(Hamiltonian):
    """H(z) = 1/2 z^T P z + b^T z with P symmetric positive definite."""

    family = "quadratic"

    def __init__(
        self,
        P: np.ndarray,
        b: np.ndarray | None = None,
        domain: Box | None = None,
    ) -> None:
        P = np.atleast_2d(np.asarray(P, dtype=np.float64))
        dim = P.shape[0]
        if P.shape != (dim, dim):
            raise InvalidModelError(f"P must be square, got {P.shape}")
        if not np.allclose(P, P.T, atol=1e-12):
            raise InvalidModelError("P must be symmetric")
        if np.min(np.linalg.eigvalsh(P)) <= 0:
            raise InvalidModelError("P must be positive definite")
        super().__init__(dim, domain)
        self.P = P
        self.b = np.zeros(dim) if b is None else np.asarray(b, dtype=np.float64).reshape(dim)
        self._chol = np.linalg.cholesky(P)

    def _value(self, z: np.ndarray) -> float:
        return float(0.5 * z @ self.P @ z + self.b @ z)

    def _gradient(self, z: np.ndarray) -> np.ndarray:
        return self.P @ z + self.b

    def _hessian(self, z: np.ndarray) -> np.ndarray:
        return self.P.copy()

    def inverse_gradient(self, w: np.ndarray) -> np.ndarray:
        w = np.asarray(w, dtype=np.float64).reshape(self.dim)
        y = np.linalg.solve(self._chol, w - self.b)
        z = np.linalg.solve(self._chol.T, y)
        if not self.domain.contains(z):
            raise NoPreimageError(f"gradient value {w.tolist()} maps outside the narrowed domain")
        return z

    def to_dict(self) -> dict[str, object]:
        out: dict[str, object] = {"family": self.family, "P": self.P.tolist()}
        if np.any(self.b):
            out["b"] = self.b.tolist()
        if self.domain != Box.unbounded(self.dim):
            out["domain"] = {"lower": list(self.domain.lower), "upper": list(self.domain.upper)}
        return out

    @classmethod
    def scalar(cls, weight: float) -> QuadraticHamiltonian:
        """H(z) = 1/2 weight z^2."""
        return cls(np.array([[weight]]))


class NegCosineHamiltonian(Hamiltonian):
    """H(z) = -sum_k gamma_k cos(z_k) on the box (-pi/2, pi/2)^dim."""

    family = "neg_cosine"

    def __init__(self, gamma: np.ndarray | float) -> None:
        gamma = np.atleast_1d(np.asarray(gamma, dtype=np.float64))
        if np.any(gamma <= 0):
            raise InvalidModelError(f"gamma must be positive, got {gamma.tolist()}")
        super().__init__(gamma.size, Box.symmetric(gamma.size, np.pi / 2))
        self.gamma = gamma

    def _value(self, z: np.ndarray) -> float:
        return float(-np.sum(self.gamma * np.cos(z)))

    def _gradient(self, z: np.ndarray) -> np.ndarray:
        return self.gamma * np.sin(z)

    def _hessian(self, z: np.ndarray) -> np.ndarray:
        return np.diag(self.gamma * np.cos(z))

    def inverse_gradient(self, w: np.ndarray) -> np.ndarray:
        w = np.asarray(w, dtype=np.float64).reshape(self.dim)
        ratio = w / self.gamma
        if np.any(np.abs(ratio) >= 1.0):
            k = int(np.argmax(np.abs(ratio)))
            raise NoPreimageError(
                f"|w[{k}]| = {abs(w[k]):.6g} is not below gamma = {self.gamma[k]:.6g}"
            )
        return np.arcsin(ratio)

    def to_dict(self) -> dict[str, object]:
        return {"family": self.family, "gamma": self.gamma.tolist()}
