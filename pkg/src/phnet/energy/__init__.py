"""Hamiltonian families, convexity domains and Bregman distances."""

from phnet.energy.base import Box, Hamiltonian, bregman
from phnet.energy.families import NegCosineHamiltonian, QuadraticHamiltonian
from phnet.energy.registry import available_families, build_hamiltonian, register_family

__all__ = [
    "Box",
    "Hamiltonian",
    "NegCosineHamiltonian",
    "QuadraticHamiltonian",
    "available_families",
    "bregman",
    "build_hamiltonian",
    "register_family",
]
