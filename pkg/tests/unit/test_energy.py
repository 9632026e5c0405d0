"""Tests for Hamiltonian families, domains and the family registry."""

import numpy as np
import pytest

from phnet.energy import (
    Box,
    NegCosineHamiltonian,
    QuadraticHamiltonian,
    available_families,
    bregman,
    build_hamiltonian,
    register_family,
)
from phnet.errors import DomainViolationError, InvalidModelError, NoPreimageError


def test_quadratic_gradient_and_inverse():
    h = QuadraticHamiltonian(np.array([[2.0, 0.5], [0.5, 1.0]]), b=np.array([0.1, -0.2]))
    z = np.array([0.3, -0.7])
    w = h.gradient(z)
    assert np.allclose(w, h.P @ z + h.b)
    assert np.allclose(h.inverse_gradient(w), z)
    assert np.allclose(h.hessian(z), h.P)


def test_quadratic_rejects_indefinite():
    with pytest.raises(InvalidModelError, match="positive definite"):
        QuadraticHamiltonian(np.array([[1.0, 0.0], [0.0, -1.0]]))


def test_quadratic_rejects_asymmetric():
    with pytest.raises(InvalidModelError, match="symmetric"):
        QuadraticHamiltonian(np.array([[1.0, 0.2], [0.0, 1.0]]))


def test_scalar_quadratic():
    h = QuadraticHamiltonian.scalar(4.0)
    assert h.value(np.array([0.5])) == pytest.approx(0.5)
    assert h.gradient(np.array([0.5])) == pytest.approx([2.0])


def test_neg_cosine_domain():
    h = NegCosineHamiltonian(2.0)
    assert h.domain == Box.symmetric(1, np.pi / 2)
    assert h.gradient(np.array([np.pi / 6])) == pytest.approx([1.0])
    with pytest.raises(DomainViolationError) as info:
        h.gradient(np.array([np.pi / 2]))
    assert info.value.coordinate == 0
    assert info.value.upper == pytest.approx(np.pi / 2)


def test_neg_cosine_inverse_gradient():
    h = NegCosineHamiltonian([2.0, 3.0])
    z = np.array([0.4, -1.1])
    assert np.allclose(h.inverse_gradient(h.gradient(z)), z)


def test_neg_cosine_no_preimage_at_capacity():
    h = NegCosineHamiltonian(2.0)
    with pytest.raises(NoPreimageError):
        h.inverse_gradient(np.array([2.0]))
    with pytest.raises(NoPreimageError):
        h.inverse_gradient(np.array([-2.5]))


def test_neg_cosine_rejects_nonpositive_gamma():
    with pytest.raises(InvalidModelError, match="gamma"):
        NegCosineHamiltonian([1.0, 0.0])


def test_bregman_zero_at_reference_and_positive_elsewhere():
    h = NegCosineHamiltonian(1.5)
    z_ref = np.array([0.3])
    assert bregman(h, z_ref, z_ref) == 0.0
    assert bregman(h, np.array([-0.4]), z_ref) > 0


def test_bregman_quadratic_closed_form():
    P = np.array([[2.0, 0.0], [0.0, 3.0]])
    h = QuadraticHamiltonian(P)
    z, z_ref = np.array([1.0, 1.0]), np.array([0.0, 2.0])
    d = z - z_ref
    assert bregman(h, z, z_ref) == pytest.approx(0.5 * d @ P @ d)


def test_box_margin_and_shrink():
    box = Box(lower=(-1.0, -np.inf), upper=(1.0, np.inf))
    assert box.margin(np.array([0.5, 100.0])) == pytest.approx(0.5)
    narrow = box.shrink(0.5)
    assert narrow.lower == (-0.5, -np.inf)
    assert narrow.upper == (0.5, np.inf)
    assert box.margin(np.zeros(0)) == np.inf


def test_box_require_reports_coordinate():
    box = Box.symmetric(3, 1.0)
    with pytest.raises(DomainViolationError) as info:
        box.require(np.array([0.0, 0.2, -1.0]))
    assert info.value.coordinate == 2


def test_registry_builds_builtin_families():
    assert {"quadratic", "neg_cosine"} <= set(available_families())
    h = build_hamiltonian(
        {"family": "quadratic", "P": [[2.0]], "domain": {"lower": [-1], "upper": [1]}}
    )
    assert isinstance(h, QuadraticHamiltonian)
    assert h.domain.is_bounded
    assert build_hamiltonian(h.to_dict()).domain == h.domain


def test_registry_unknown_family():
    with pytest.raises(InvalidModelError, match="unknown Hamiltonian family"):
        build_hamiltonian({"family": "quartic"})


def test_register_family_rejects_duplicates():
    with pytest.raises(ValueError, match="already registered"):
        register_family("quadratic", lambda params: QuadraticHamiltonian.scalar(1.0))
