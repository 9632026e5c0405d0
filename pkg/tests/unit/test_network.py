"""Tests for node validation, elimination and the network vector field."""

import numpy as np
import pytest

from phnet.energy import NegCosineHamiltonian, QuadraticHamiltonian
from phnet.errors import (
    AlgebraicInconsistencyError,
    DomainViolationError,
    InvalidModelError,
    UnsupportedConfigurationError,
)
from phnet.graph import Graph, NodeClass
from phnet.network import (
    EdgeBank,
    NetworkSpec,
    NodeSpec,
    ReducedState,
    eliminate_algebraic,
    evaluate,
    interconnection,
    outputs,
    power_balance_residual,
    total_energy,
    vector_field,
)


def _node(J, R, G, P, cls=12, delta=0.0):
    G = np.atleast_2d(np.asarray(G, dtype=float))
    return NodeSpec(
        J=np.asarray(J, dtype=float),
        R=np.asarray(R, dtype=float),
        G=G,
        H=QuadraticHamiltonian(np.asarray(P, dtype=float)),
        node_class=NodeClass(cls),
        delta=np.full(G.shape[1], delta),
    )


def test_node_rejects_non_skew_j():
    with pytest.raises(InvalidModelError, match="skew"):
        _node([[0, 1], [1, 0]], np.eye(2), [[1], [0]], np.eye(2))


def test_node_rejects_non_pd_r():
    with pytest.raises(InvalidModelError, match="positive definite"):
        _node(np.zeros((2, 2)), np.diag([1.0, 0.0]), [[1], [0]], np.eye(2))


def test_node_rejects_rank_deficient_g():
    with pytest.raises(InvalidModelError, match="full column rank"):
        _node(np.zeros((2, 2)), np.eye(2), [[1, 1], [1, 1]], np.eye(2))


def test_node_rejects_wrong_delta_shape():
    with pytest.raises(InvalidModelError, match="delta"):
        NodeSpec(
            J=np.zeros((2, 2)),
            R=np.eye(2),
            G=np.eye(2),
            H=QuadraticHamiltonian(np.eye(2)),
            node_class=NodeClass.DIFF_FREE,
            delta=np.zeros(1),
        )


def test_port_map_is_negative_definite():
    node = _node([[0, 2], [-2, 0]], [[1, 0.2], [0.2, 0.5]], [[1], [0.5]], np.eye(2))
    K = node.port_map
    assert K.shape == (1, 1)
    assert K[0, 0] < 0


def test_network_rejects_mixed_port_dimensions(make_node):
    wide = _node(np.zeros((2, 2)), np.eye(2), np.eye(2), np.eye(2))
    with pytest.raises(InvalidModelError, match="mixed port"):
        NetworkSpec(
            graph=Graph.from_pairs(2, [(1, 2)]),
            nodes=(make_node(12), wide),
            edges=EdgeBank.of([NegCosineHamiltonian(1.0)]),
        )


def test_interconnection_sums_to_zero(ring4):
    eta = np.array([0.1, -0.2, 0.3, 0.05])
    mu, sigma = interconnection(ring4, eta)
    assert mu.shape == (4, 1)
    assert np.sum(sigma) == pytest.approx(0.0, abs=1e-14)


def test_elimination_solves_algebraic_equations(ring4):
    eta = np.array([0.1, -0.2, 0.3, 0.05])
    elim = eliminate_algebraic(ring4, eta)
    assert set(elim.states) == {2, 3}
    assert elim.residual <= 1e-12
    _, sigma = interconnection(ring4, eta)
    # Scalar node with J = 0, R = r, G = 1: grad H = (sigma + delta) / r.
    node = ring4.nodes[3]
    expected = (sigma[3] + node.delta) / node.R[0, 0]
    assert np.allclose(elim.gradients[3], expected)


def test_elimination_without_preimage_names_node(make_node):
    algebraic = NodeSpec(
        J=np.zeros((1, 1)),
        R=np.eye(1),
        G=np.eye(1),
        H=NegCosineHamiltonian(0.1),
        node_class=NodeClass.ALG_FREE,
        delta=np.array([0.5]),
    )
    spec = NetworkSpec(
        graph=Graph.from_pairs(2, [(1, 2)]),
        nodes=(make_node(12), algebraic),
        edges=EdgeBank.of([QuadraticHamiltonian.scalar(1.0)]),
    )
    with pytest.raises(AlgebraicInconsistencyError) as info:
        eliminate_algebraic(spec, np.zeros(1))
    assert info.value.node == 2


def test_uncontrolled_node_rejects_input(ring4):
    u = np.zeros((4, 1))
    u[0] = 1.0
    with pytest.raises(ValueError, match="not controlled"):
        ring4.check_inputs(u)


def test_layout_holds_only_differential_nodes(ring4):
    layout = ring4.layout
    assert layout.eta_size == 4
    assert layout.x1_size == 2
    assert list(layout.node_slices) == [0, 1]


def test_eta_dot_is_incidence_transpose_of_outputs(ring4):
    s = ReducedState(
        eta=np.array([0.1, 0.0, -0.1, 0.2]), x1=np.array([0.3, -0.2]), xi=np.zeros(0)
    )
    ev = evaluate(ring4, s)
    assert np.allclose(ev.eta_dot, (ring4.B.T @ ev.y).reshape(-1))
    assert np.allclose(outputs(ring4, s), ev.y)


def test_vector_field_matches_scalar_formula(path3):
    s = ReducedState(eta=np.array([0.2, -0.1]), x1=np.array([0.5, -0.3, 0.1]), xi=np.zeros(0))
    u = np.array([[0.4], [0.0], [0.0]])
    rate = vector_field(path3, s, u)
    gamma = np.array([2.0, 3.0])
    sigma = -(path3.B @ (gamma * np.sin(s.eta)))
    grads = np.array([1.0 * 0.5, 2.0 * -0.3, 1.0 * 0.1])
    r = np.array([1.0, 1.0, 0.5])
    delta = np.array([0.0, -0.2, 0.1])
    assert np.allclose(rate.x1, -r * grads + sigma + u[:, 0] + delta)


def test_equal_outputs_stop_edges(ring4):
    y_c = 0.1
    s = ReducedState(eta=np.zeros(4), x1=np.array([y_c / 2.0, y_c / 1.0]), xi=np.zeros(0))
    ev = evaluate(ring4, s)
    assert ev.y[0, 0] == pytest.approx(ev.y[1, 0])
    assert ev.eta_dot[0] == pytest.approx(0.0)


def test_domain_violation_on_edges_carries_flat_index(ring4):
    s = ReducedState(eta=np.array([0.0, 0.0, 2.0, 0.0]), x1=np.zeros(2), xi=np.zeros(0))
    with pytest.raises(DomainViolationError) as info:
        evaluate(ring4, s)
    assert info.value.coordinate == 2


def test_power_balance_pure_ode(path3):
    s = ReducedState(eta=np.array([0.2, -0.1]), x1=np.array([0.5, -0.3, 0.1]), xi=np.zeros(0))
    u = np.array([[0.4], [0.0], [0.0]])
    rate = vector_field(path3, s, u)
    assert power_balance_residual(path3, s, u, rate) < 1e-12


def test_power_balance_refuses_algebraic_networks(ring4):
    s = ReducedState(eta=np.zeros(4), x1=np.zeros(2), xi=np.zeros(0))
    with pytest.raises(UnsupportedConfigurationError):
        power_balance_residual(ring4, s, None, vector_field(ring4, s))


def test_total_energy(path3):
    s = ReducedState(eta=np.zeros(2), x1=np.array([1.0, 1.0, 2.0]), xi=np.zeros(0))
    # Node energies 1/2 p x^2 plus edges -gamma at eta = 0.
    assert total_energy(path3, s) == pytest.approx(0.5 + 1.0 + 2.0 - 5.0)
