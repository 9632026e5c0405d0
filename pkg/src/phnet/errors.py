"""Exception hierarchy shared by all phnet modules."""

from __future__ import annotations


class PhnetError(Exception):
    """Base class for every error raised by phnet."""


class DomainViolationError(PhnetError, ValueError):
    """A point lies outside the open convexity domain of a Hamiltonian."""

    def __init__(self, coordinate: int, value: float, lower: float, upper: float) -> None:
        self.coordinate = coordinate
        self.value = value
        self.lower = lower
        self.upper = upper
        super().__init__(
            f"coordinate {coordinate} = {value!r} outside open interval ({lower}, {upper})"
        )


class NoPreimageError(PhnetError, ValueError):
    """A gradient value has no preimage inside the domain."""


class AlgebraicInconsistencyError(PhnetError, ValueError):
    """An algebraic node equation has no solution inside the node domain."""

    def __init__(self, node: int, detail: str) -> None:
        self.node = node
        super().__init__(f"algebraic node {node}: {detail}")


class InvalidModelError(PhnetError, ValueError):
    """Model data violates a structural requirement (skew, PD, rank, dimensions)."""


class UnsupportedConfigurationError(PhnetError):
    """The requested operation is not defined for this configuration."""


class InfeasibleError(PhnetError, RuntimeError):
    """No steady state / constrained optimum exists for the requested operation."""


class StiffnessError(PhnetError, RuntimeError):
    """The adaptive integrator step size underflowed."""


class ScenarioError(PhnetError, ValueError):
    """A scenario file could not be read or validated."""
