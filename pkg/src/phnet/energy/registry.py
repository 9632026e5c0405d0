"""Registry of Hamiltonian families keyed by their scenario-file name."""

from __future__ import annotations

from collections.abc import Callable, Mapping
from typing import Any

import numpy as np

from phnet.energy.base import Box, Hamiltonian
from phnet.energy.families import NegCosineHamiltonian, QuadraticHamiltonian
from phnet.errors import InvalidModelError

FamilyBuilder = Callable[[Mapping[str, Any]], Hamiltonian]

_FAMILIES: dict[str, FamilyBuilder] = {}


def register_family(name: str, builder: FamilyBuilder) -> None:
    """Register a user-defined family; the builder receives the parameter mapping."""
    if name in _FAMILIES:
        raise ValueError(f"Hamiltonian family '{name}' already registered")
    _FAMILIES[name] = builder


def available_families() -> list[str]:
    return sorted(_FAMILIES)


def build_hamiltonian(params: Mapping[str, Any]) -> Hamiltonian:
    """Build a Hamiltonian from ``{"family": name, ...parameters}``."""
    family = params.get("family")
    builder = _FAMILIES.get(str(family))
    if builder is None:
        raise InvalidModelError(
            f"unknown Hamiltonian family '{family}'; available: {available_families()}"
        )
    return builder(params)


def _build_quadratic(params: Mapping[str, Any]) -> Hamiltonian:
    domain = None
    if params.get("domain") is not None:
        d = params["domain"]
        domain = Box(lower=tuple(map(float, d["lower"])), upper=tuple(map(float, d["upper"])))
    b = params.get("b")
    return QuadraticHamiltonian(
        np.asarray(params["P"], dtype=np.float64),
        None if b is None else np.asarray(b, dtype=np.float64),
        domain,
    )


def _build_neg_cosine(params: Mapping[str, Any]) -> Hamiltonian:
    return NegCosineHamiltonian(np.asarray(params["gamma"], dtype=np.float64))


register_family("quadratic", _build_quadratic)
register_family("neg_cosine", _build_neg_cosine)
