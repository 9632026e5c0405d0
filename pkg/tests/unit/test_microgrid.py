"""Tests for the microgrid builder, dispatch and angle-form equations."""

import json

import numpy as np
import pytest
from pydantic import ValidationError

from phnet.errors import InvalidModelError
from phnet.graph import NodeClass
from phnet.microgrid import (
    GridConfig,
    build,
    dispatch,
    initial_state,
    inject_failure,
    recover_angles,
    swing_rates,
)

TREE = {
    "buses": [
        {"kind": "generator", "inertia": 2.0, "damping": 1.0, "q": 1.0},
        {"kind": "load", "damping": 1.0, "delta": -0.2},
        {"kind": "load", "damping": 0.5, "delta": -0.1},
    ],
    "lines": [{"from": 1, "to": 2, "gamma": 1.0}, {"from": 2, "to": 3, "gamma": 1.0}],
}


@pytest.fixture
def grid9(scenario_dir):
    data = json.loads((scenario_dir / "microgrid_9bus.json").read_text())
    return GridConfig.model_validate(data["grid"])


def test_bus_kinds_map_to_classes(grid9):
    network, controller = build(grid9)
    classes = [node.node_class for node in network.nodes]
    assert classes[:3] == [NodeClass.DIFF_CONTROLLED] * 3
    assert classes[3:6] == [NodeClass.ALG_CONTROLLED] * 3
    assert classes[6:] == [NodeClass.ALG_FREE] * 3
    assert controller.kind == "distributed"
    assert controller.nodes == tuple(range(6))
    assert controller.y_star == pytest.approx([0.0])
    # Generators store momentum: H = p^2 / (2 M).
    assert network.nodes[0].H.gradient(np.array([4.0])) == pytest.approx([1.0])


def test_dispatch_splits_by_weight(grid9):
    report = dispatch(grid9)
    assert report.feasible
    assert report.lam == pytest.approx(1 / 3, abs=1e-9)
    for bus in (1, 2, 3):
        assert report.u_bar[bus] == pytest.approx(1 / 3, abs=1e-9)
    for bus in (4, 5, 6):
        assert report.u_bar[bus] == pytest.approx(1 / 6, abs=1e-9)
    assert report.total_input == pytest.approx(1.5)
    assert report.qp_deviation < 1e-8
    assert 0 < report.binding_ratio < 1


def test_dispatch_flows_balance_loads():
    cfg = GridConfig.model_validate(TREE)
    report = dispatch(cfg)
    assert report.u_bar == {1: pytest.approx(0.3)}
    theta = recover_angles(build(cfg)[0], np.array(report.eta_bar))
    omega_dot, mismatch = swing_rates(cfg, theta, np.zeros(3), report.u_bar)
    assert np.max(np.abs(mismatch)) < 1e-7
    assert np.max(np.abs(omega_dot)) < 1e-7
    assert report.line_flows == pytest.approx([0.3, 0.1], abs=1e-7)


def test_dispatch_honours_domain_shrink():
    cfg = GridConfig.model_validate(TREE)
    # Line 1 needs |eta| = arcsin(0.3), about 0.305; a 0.1 box stops at 0.157.
    report = dispatch(cfg, shrink=0.1)
    assert not report.feasible
    assert report.reason
    assert report.u_bar == {1: pytest.approx(0.3)}


def test_failed_bus_rebalances_the_rest(grid9):
    failed = inject_failure(grid9, [1], [0.2])
    report = dispatch(failed)
    assert report.feasible
    assert set(report.u_bar) == {2, 3, 4, 5, 6}
    assert report.total_input == pytest.approx(1.3)
    assert report.lam == pytest.approx(1.3 / 3.5)
    assert report.frozen == {1: 0.2}

    network, controller = build(failed)
    assert network.nodes[0].node_class is NodeClass.DIFF_FREE
    assert network.nodes[0].delta == pytest.approx([0.2])
    assert controller.comm.num_nodes == 5


def test_inject_failure_rejects_load_bus(grid9):
    with pytest.raises(InvalidModelError, match="not actuated"):
        inject_failure(grid9, [7], [0.1])


def test_inject_failure_of_every_actuated_bus(grid9):
    with pytest.raises(InvalidModelError, match="no controller"):
        inject_failure(grid9, [1, 2, 3, 4, 5, 6], [0.1] * 6)


def test_overloaded_line_is_infeasible():
    cfg = GridConfig.model_validate(
        {
            "buses": [
                {"kind": "generator", "inertia": 2.0, "damping": 1.0, "q": 1.0},
                {"kind": "load", "damping": 1.0, "delta": -1.0},
            ],
            "lines": [{"from": 1, "to": 2, "gamma": 0.5}],
        }
    )
    report = dispatch(cfg)
    assert not report.feasible
    assert report.binding_line == 1
    assert report.reason


def test_recover_angles_on_tree():
    network, _ = build(GridConfig.model_validate(TREE))
    theta = recover_angles(network, np.array([0.1, -0.2]))
    assert theta == pytest.approx([0.0, -0.1, 0.1])


def test_initial_state_uses_momentum(grid9):
    data = grid9.model_dump(by_alias=True)
    data["buses"][1]["omega0"] = 0.5
    data["lines"][0]["eta0"] = 0.1
    cfg = GridConfig.model_validate(data)
    network, _ = build(cfg)
    s0 = initial_state(cfg, network)
    assert s0.x1 == pytest.approx([0.0, 2.5, 0.0])
    assert s0.eta[0] == pytest.approx(0.1)


@pytest.mark.parametrize(
    "bus",
    [
        {"kind": "generator", "damping": 1.0, "q": 1.0},
        {"kind": "inverter", "inertia": 1.0, "damping": 1.0, "q": 1.0},
        {"kind": "load", "damping": 1.0, "q": 1.0},
        {"kind": "inverter", "damping": 1.0},
        {"kind": "load", "damping": 0.0},
    ],
)
def test_bus_validation(bus):
    with pytest.raises(ValidationError):
        GridConfig.model_validate(
            {
                "buses": [{"kind": "generator", "inertia": 1.0, "damping": 1.0, "q": 1.0}, bus],
                "lines": [{"from": 1, "to": 2, "gamma": 1.0}],
            }
        )


def test_comm_link_to_load_rejected(grid9):
    data = grid9.model_dump(by_alias=True)
    data["comm"].append((6, 7))
    with pytest.raises(ValidationError, match="not actuated"):
        GridConfig.model_validate(data)


def test_disconnected_lines_rejected():
    with pytest.raises(ValidationError, match="not connected"):
        GridConfig.model_validate(
            {
                "buses": [
                    {"kind": "generator", "inertia": 1.0, "damping": 1.0, "q": 1.0},
                    {"kind": "load", "damping": 1.0},
                ],
            }
        )
