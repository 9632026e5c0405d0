"""Shared test fixtures."""

from __future__ import annotations

from collections.abc import Callable
from pathlib import Path

import numpy as np
import pytest

from phnet.control import ControllerSpec
from phnet.energy import NegCosineHamiltonian, QuadraticHamiltonian
from phnet.graph import Graph, NodeClass
from phnet.network import EdgeBank, NetworkSpec, NodeSpec

REPO_ROOT = Path(__file__).resolve().parent.parent

NodeFactory = Callable[..., NodeSpec]


def _scalar_node(node_class: int, r: float = 1.0, p: float = 1.0, delta: float = 0.0) -> NodeSpec:
    return NodeSpec(
        J=np.zeros((1, 1)),
        R=np.array([[r]]),
        G=np.eye(1),
        H=QuadraticHamiltonian.scalar(p),
        node_class=NodeClass(node_class),
        delta=np.array([delta]),
    )


@pytest.fixture
def make_node() -> NodeFactory:
    """Factory for scalar nodes with H = p x^2 / 2, J = 0, R = r, G = 1."""
    return _scalar_node


@pytest.fixture
def ring4() -> NetworkSpec:
    """Four uncontrolled nodes on a cycle; nodes 3 and 4 are algebraic."""
    graph = Graph.from_pairs(4, [(1, 2), (2, 3), (3, 4), (4, 1)])
    nodes = (
        _scalar_node(12, r=1.0, p=2.0, delta=0.3),
        _scalar_node(12, r=2.0, p=1.0, delta=-0.1),
        _scalar_node(22, r=1.0, p=1.0, delta=0.2),
        _scalar_node(22, r=0.5, p=3.0, delta=-0.2),
    )
    edges = EdgeBank.of([NegCosineHamiltonian(g) for g in (2.0, 2.5, 2.0, 1.5)])
    return NetworkSpec(graph=graph, nodes=nodes, edges=edges)


@pytest.fixture
def path3() -> NetworkSpec:
    """Three differential nodes on a path (a tree), node 1 controlled."""
    graph = Graph.from_pairs(3, [(1, 2), (2, 3)])
    nodes = (
        _scalar_node(11, r=1.0, p=1.0),
        _scalar_node(12, r=1.0, p=2.0, delta=-0.2),
        _scalar_node(12, r=0.5, p=1.0, delta=0.1),
    )
    edges = EdgeBank.of([NegCosineHamiltonian(2.0), NegCosineHamiltonian(3.0)])
    return NetworkSpec(graph=graph, nodes=nodes, edges=edges)


@pytest.fixture
def mixed6() -> NetworkSpec:
    """Six nodes covering all classes; controlled nodes are 1, 2, 3 and 5 (0-based 0, 1, 2, 4)."""
    graph = Graph.from_pairs(6, [(1, 2), (2, 3), (3, 4), (4, 5), (5, 6), (6, 1), (2, 5)])
    nodes = (
        _scalar_node(11, r=1.0, p=1.0, delta=0.1),
        _scalar_node(11, r=1.2, p=2.0),
        _scalar_node(11, r=0.8, p=1.5, delta=-0.3),
        _scalar_node(12, r=1.0, p=1.0, delta=-0.2),
        _scalar_node(21, r=1.0, p=1.0),
        _scalar_node(22, r=0.6, p=2.0, delta=-0.1),
    )
    edges = EdgeBank.of(
        [NegCosineHamiltonian(g) for g in (3.0, 3.0, 2.5, 3.0, 2.0, 2.5)]
        + [QuadraticHamiltonian.scalar(1.5)]
    )
    return NetworkSpec(graph=graph, nodes=nodes, edges=edges)


@pytest.fixture
def mixed6_weights() -> dict[int, np.ndarray]:
    return {0: np.array([[1.0]]), 1: np.array([[2.0]]), 2: np.array([[0.5]]), 4: np.array([[1.5]])}


@pytest.fixture
def mixed6_controller(mixed6_weights: dict[int, np.ndarray]) -> ControllerSpec:
    nodes = sorted(mixed6_weights)
    comm = Graph(num_nodes=4, edges=((0, 1), (1, 2), (2, 3)))
    return ControllerSpec.distributed(
        nodes, [0.2], [mixed6_weights[i] for i in nodes], comm
    )


@pytest.fixture
def scenario_dir() -> Path:
    return REPO_ROOT / "scenarios"


@pytest.fixture
def fixtures_dir() -> Path:
    return Path(__file__).resolve().parent / "fixtures"
