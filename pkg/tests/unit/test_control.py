"""Tests for controller specs, fail-mode resolution and the control laws."""

import numpy as np
import pytest

from phnet.control import (
    ControllerSpec,
    controller_inputs,
    controller_rates,
    freeze,
    resolve,
    steady_controller_state,
    warm_start,
)
from phnet.energy import NegCosineHamiltonian
from phnet.errors import InvalidModelError
from phnet.graph import Graph, NodeClass
from phnet.network import EdgeBank, NetworkSpec
from phnet.steadystate import optimal_report, solve_feasibility


def test_integral_rates_and_inputs():
    c = ControllerSpec.integral([0, 2], [0.5])
    xi = np.array([0.1, -0.2])
    y = np.array([[0.4], [9.0], [0.7]])
    xi_dot, u = controller_rates(c, xi, y)
    assert xi_dot == pytest.approx([0.1, -0.2])
    assert u[0] == pytest.approx([0.1])
    assert u[2] == pytest.approx([-0.2])


def test_distributed_rates(mixed6_controller):
    xi = np.array([1.0, 2.0, 3.0, 4.0])
    y = np.full((6, 1), 0.2)
    xi_dot, u = controller_rates(mixed6_controller, xi, y)
    # At y = y* only the consensus term remains: -L xi on the path 1-2-3-4.
    assert xi_dot == pytest.approx([1.0, 0.0, 0.0, -1.0])
    assert u[1] == pytest.approx([1.0])
    assert u[4] == pytest.approx([4.0 / 1.5])


def test_distributed_rates_two_nodes():
    c = ControllerSpec.distributed(
        [0, 1], [0.0], [np.eye(1), np.eye(1)], Graph.from_pairs(2, [(1, 2)])
    )
    xi_dot, u = controller_rates(c, np.array([1.0, 0.0]), np.zeros((2, 1)))
    assert xi_dot == pytest.approx([-1.0, 1.0])
    assert u[0] == pytest.approx([1.0])
    assert u[1] == pytest.approx([0.0])


def test_constant_controller_has_no_state():
    c = ControllerSpec.constant([0, 1], np.array([[0.3], [0.4]]))
    assert c.state_size == 0
    xi_dot, u = controller_rates(c, np.zeros(0), np.zeros((2, 1)))
    assert xi_dot.size == 0
    assert u[1] == pytest.approx([0.4])


def test_distributed_needs_weights_per_node():
    with pytest.raises(InvalidModelError, match="weights"):
        comm = Graph(num_nodes=2, edges=((0, 1),))
        ControllerSpec.distributed([0, 1], [0.0], [np.eye(1)], comm)


def test_xi0_length_checked():
    with pytest.raises(InvalidModelError, match="xi0"):
        ControllerSpec.integral([0, 1], [0.0], xi0=np.zeros(3))


def test_resolve_requires_every_controlled_node(mixed6):
    c = ControllerSpec.integral([0, 1], [0.2])
    with pytest.raises(InvalidModelError, match="missing"):
        resolve(c, mixed6)


def test_resolve_requires_differential_controlled_node(make_node):
    spec = NetworkSpec(
        graph=Graph.from_pairs(2, [(1, 2)]),
        nodes=(make_node(21), make_node(12)),
        edges=EdgeBank.of([NegCosineHamiltonian(1.0)]),
    )
    with pytest.raises(InvalidModelError, match="class-11"):
        resolve(ControllerSpec.integral([0], [0.0]), spec)


def test_freeze_folds_level_into_disturbance(mixed6, mixed6_controller):
    frozen = freeze(mixed6_controller, [4], [np.array([0.25])])
    network, c = resolve(frozen, mixed6)
    assert network.nodes[4].node_class is NodeClass.ALG_FREE
    assert network.nodes[4].delta == pytest.approx([0.25])
    assert c.nodes == (0, 1, 2)
    assert c.comm.num_nodes == 3
    assert c.resolved
    # A resolved controller passes through unchanged.
    again_network, again = resolve(c, network)
    assert again_network is network
    assert again is c


def test_freeze_breaking_comm_graph_is_rejected(mixed6, mixed6_controller):
    # Node 2 (index 1) is the only link between node 1 and nodes 3, 5.
    with pytest.raises(InvalidModelError, match="not connected"):
        resolve(freeze(mixed6_controller, [1], [np.array([0.1])]), mixed6)


def test_freeze_everything_gives_constant_controller(mixed6_controller):
    levels = [np.array([0.1])] * 4
    c = freeze(mixed6_controller, [0, 1, 2, 4], levels)
    assert c.kind == "constant"
    assert c.state_size == 0


def test_freeze_rejects_uncontrolled_node(mixed6_controller):
    with pytest.raises(InvalidModelError, match="cannot be frozen"):
        freeze(mixed6_controller, [3], [np.array([0.1])])


def test_freeze_nothing_is_identity(mixed6_controller):
    assert freeze(mixed6_controller, [], []) is mixed6_controller


def test_steady_state_integral(path3):
    c = ControllerSpec.integral([0], [0.3])
    report = solve_feasibility(path3, np.array([0.3]))
    assert steady_controller_state(c, report) == pytest.approx(report.u_bar[0])


def test_steady_state_distributed(mixed6, mixed6_controller, mixed6_weights):
    report = optimal_report(mixed6, np.array([0.2]), mixed6_weights)
    xi_bar = steady_controller_state(mixed6_controller, report)
    assert xi_bar == pytest.approx(np.tile(report.lam, 4))
    u = controller_inputs(mixed6_controller, xi_bar)
    for i, u_i in u.items():
        assert u_i == pytest.approx(report.u_bar[i])


def test_warm_start_stays_in_box(mixed6_controller):
    xi_bar = np.array([0.1, 0.2, 0.3, 0.4])
    c = warm_start(mixed6_controller, xi_bar, 0.05, np.random.default_rng(3))
    assert np.max(np.abs(c.initial_state() - xi_bar)) <= 0.05
    again = warm_start(mixed6_controller, xi_bar, 0.05, np.random.default_rng(3))
    assert np.array_equal(c.initial_state(), again.initial_state())
