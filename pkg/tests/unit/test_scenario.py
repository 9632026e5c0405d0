"""Tests for scenario loading, hashing and construction."""

import json

import numpy as np
import pytest

from phnet.config.defaults import DEFAULT_SEED
from phnet.errors import InvalidModelError, ScenarioError
from phnet.graph import NodeClass
from phnet.scenario import build_scenario, canonical_hash, load_scenario, parse_scenario


def _minimal(**overrides):
    raw = {
        "version": "v1",
        "meta": {"name": "pair"},
        "graph": {
            "num_nodes": 2,
            "edges": [{"from": 1, "to": 2, "H": {"family": "neg_cosine", "gamma": 1.0}}],
        },
        "nodes": [
            {"class": 11, "R": 1.0, "H": {"family": "quadratic", "P": [[1.0]]}},
            {"class": 12, "R": 1.0, "H": {"family": "quadratic", "P": [[1.0]]}, "delta": -0.1},
        ],
    }
    raw.update(overrides)
    return raw


def test_shipped_scenarios_load(scenario_dir):
    paths = sorted(scenario_dir.glob("*.json"))
    assert paths
    for path in paths:
        loaded = load_scenario(path)
        built = build_scenario(loaded.scenario)
        assert built.name == path.stem


def test_hash_ignores_key_order():
    raw = _minimal()
    reordered = json.loads(json.dumps(raw, sort_keys=True))
    assert canonical_hash(raw) == canonical_hash(dict(reversed(list(reordered.items()))))
    changed = _minimal(meta={"name": "pair", "seed": 3})
    assert canonical_hash(changed) != canonical_hash(raw)


def test_seed_defaults_when_meta_omits_it():
    built = build_scenario(parse_scenario(_minimal()).scenario)
    assert built.seed == DEFAULT_SEED
    seeded = build_scenario(parse_scenario(_minimal(meta={"name": "pair", "seed": 3})).scenario)
    assert seeded.seed == 3


def test_malformed_json(fixtures_dir):
    with pytest.raises(ScenarioError, match="line"):
        load_scenario(fixtures_dir / "malformed.json")


def test_missing_file(tmp_path):
    with pytest.raises(ScenarioError, match="cannot read"):
        load_scenario(tmp_path / "absent.json")


def test_non_positive_gamma(fixtures_dir):
    with pytest.raises(ScenarioError, match="gamma"):
        load_scenario(fixtures_dir / "bad_gamma.json")


def test_unknown_version():
    with pytest.raises(ScenarioError, match="version"):
        parse_scenario(_minimal(version="v2"))


def test_node_count_must_match_graph():
    raw = _minimal()
    raw["graph"]["num_nodes"] = 3
    with pytest.raises(ScenarioError, match="3 nodes"):
        parse_scenario(raw)


def test_grid_form_rejects_controller(scenario_dir):
    raw = json.loads((scenario_dir / "microgrid_9bus.json").read_text())
    raw["controller"] = {"kind": "none"}
    with pytest.raises(ScenarioError, match="controller"):
        parse_scenario(raw)


def test_non_skew_j_rejected_at_build(fixtures_dir):
    loaded = load_scenario(fixtures_dir / "non_skew.json")
    with pytest.raises(InvalidModelError, match="skew"):
        build_scenario(loaded.scenario)


def test_build_initial_state(fixtures_dir):
    built = build_scenario(load_scenario(fixtures_dir / "pure_ode.json").scenario)
    assert built.s0.eta == pytest.approx([0.1, -0.2])
    assert built.s0.x1 == pytest.approx([0.1, -0.1, 0.3, -0.2])
    assert built.controller.kind == "none"


def test_x0_size_checked():
    raw = _minimal()
    raw["nodes"][0]["x0"] = [0.1, 0.2]
    with pytest.raises(InvalidModelError, match="x0"):
        build_scenario(parse_scenario(raw).scenario)


def test_integral_controller_defaults_to_controlled_nodes():
    raw = _minimal(controller={"kind": "integral", "y_star": 0.2})
    built = build_scenario(parse_scenario(raw).scenario)
    assert built.controller.nodes == (0,)
    assert built.target_output() == pytest.approx([0.2])


def test_free_network_targets_agreement():
    raw = _minimal()
    raw["nodes"][0]["class"] = 12
    built = build_scenario(parse_scenario(raw).scenario)
    # (delta_1 + delta_2) / (r_1 + r_2)
    assert built.target_output() == pytest.approx([-0.05])


def test_comm_link_outside_controller():
    raw = _minimal(
        controller={"kind": "distributed", "y_star": 0.0, "Q": [1.0], "comm": [[1, 2]]}
    )
    with pytest.raises(InvalidModelError, match="comm link"):
        build_scenario(parse_scenario(raw).scenario)


def test_frozen_node_folded_on_resolve():
    raw = _minimal()
    raw["nodes"].append({"class": 11, "R": 1.0, "H": {"family": "quadratic", "P": [[1.0]]}})
    raw["graph"]["num_nodes"] = 3
    raw["graph"]["edges"].append(
        {"from": 2, "to": 3, "H": {"family": "neg_cosine", "gamma": 1.0}}
    )
    raw["controller"] = {"kind": "integral", "y_star": 0.0, "frozen": {"3": 0.4}}
    built = build_scenario(parse_scenario(raw).scenario)
    network, controller = built.resolved
    assert network.nodes[2].node_class is NodeClass.DIFF_FREE
    assert network.nodes[2].delta == pytest.approx([0.4])
    assert controller.nodes == (0,)
    assert np.array_equal(built.network.nodes[2].delta, [0.0])
