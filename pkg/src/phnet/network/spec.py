"""Assembled network: graph, node data, edge bank and the reduced-state layout."""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from phnet.config.defaults import CONDITION_WARN
from phnet.energy import Box
from phnet.errors import InvalidModelError
from phnet.graph import Graph, NodeClass, NodePartition, incidence_matrix
from phnet.network.edges import EdgeBank
from phnet.network.node import NodeSpec
from phnet.utils.logging import get_logger

log = get_logger(__name__)


@dataclass(frozen=True)
class ReducedState:
    """Integrated state: edge states, differential-node states, controller states."""

    eta: np.ndarray
    x1: np.ndarray
    xi: np.ndarray

    def pack(self) -> np.ndarray:
        return np.concatenate([self.eta, self.x1, self.xi])


@dataclass(frozen=True)
class StateLayout:
    """Offsets of (eta, x1, xi) inside the flat integrator vector."""

    eta_size: int
    node_slices: Mapping[int, slice]
    x1_size: int
    xi_size: int = 0

    @property
    def size(self) -> int:
        return self.eta_size + self.x1_size + self.xi_size

    def with_controller(self, xi_size: int) -> StateLayout:
        return StateLayout(self.eta_size, self.node_slices, self.x1_size, xi_size)

    def unpack(self, vec: np.ndarray) -> ReducedState:
        vec = np.asarray(vec, dtype=np.float64)
        if vec.shape != (self.size,):
            raise ValueError(f"state vector has shape {vec.shape}, expected ({self.size},)")
        a = self.eta_size
        b = a + self.x1_size
        return ReducedState(eta=vec[:a], x1=vec[a:b], xi=vec[b:])

    def node_state(self, state: ReducedState, node: int) -> np.ndarray:
        return state.x1[self.node_slices[node]]

    def stack_nodes(self, states: Mapping[int, np.ndarray]) -> np.ndarray:
        x1 = np.zeros(self.x1_size)
        for node, sl in self.node_slices.items():
            x1[sl] = states[node]
        return x1


@dataclass(frozen=True, eq=False)
class NetworkSpec:
    """Graph + nodes + edges forming the interconnected network."""

    graph: Graph
    nodes: tuple[NodeSpec, ...]
    edges: EdgeBank

    def __post_init__(self) -> None:
        object.__setattr__(self, "nodes", tuple(self.nodes))
        if len(self.nodes) != self.graph.num_nodes:
            raise InvalidModelError(
                f"{len(self.nodes)} nodes given for a graph with {self.graph.num_nodes} nodes"
            )
        if len(self.edges) != self.graph.num_edges:
            raise InvalidModelError(
                f"{len(self.edges)} edge Hamiltonians given for {self.graph.num_edges} edges"
            )
        ports = {node.m for node in self.nodes}
        if len(ports) != 1:
            raise InvalidModelError(f"nodes have mixed port dimensions {sorted(ports)}")
        if self.edges.m is not None and self.edges.m != self.m:
            raise InvalidModelError(
                f"edge dimension {self.edges.m} does not match port dimension {self.m}"
            )
        for i, node in enumerate(self.nodes):
            if node.condition > CONDITION_WARN:
                log.warning("condition_number_high", node=i + 1, cond=node.condition)

    @property
    def m(self) -> int:
        return self.nodes[0].m

    @property
    def num_nodes(self) -> int:
        return self.graph.num_nodes

    @property
    def num_edges(self) -> int:
        return self.graph.num_edges

    @cached_property
    def partition(self) -> NodePartition:
        return NodePartition(classes=tuple(node.node_class for node in self.nodes))

    @cached_property
    def B(self) -> np.ndarray:
        return incidence_matrix(self.graph)

    @cached_property
    def layout(self) -> StateLayout:
        slices: dict[int, slice] = {}
        offset = 0
        for i in self.partition.differential:
            n = self.nodes[i].n
            slices[i] = slice(offset, offset + n)
            offset += n
        return StateLayout(self.num_edges * self.m, slices, offset)

    @cached_property
    def edge_domain(self) -> Box:
        return self.edges.domain()

    @property
    def disturbances(self) -> np.ndarray:
        return np.stack([node.delta for node in self.nodes])

    def zero_inputs(self) -> np.ndarray:
        return np.zeros((self.num_nodes, self.m))

    def check_inputs(self, u: np.ndarray | None) -> np.ndarray:
        """Validate an (N, m) input array; rows of uncontrolled nodes must be zero."""
        if u is None:
            return self.zero_inputs()
        u = np.asarray(u, dtype=np.float64).reshape(self.num_nodes, self.m)
        for i in range(self.num_nodes):
            if not self.nodes[i].node_class.is_controlled and np.any(u[i]):
                raise ValueError(f"node {i + 1} is not controlled but receives input {u[i]}")
        return u

    def inputs_from(self, values: Mapping[int, np.ndarray]) -> np.ndarray:
        u = self.zero_inputs()
        for i, v in values.items():
            u[i] = v
        return self.check_inputs(u)

    def with_nodes(self, updates: Mapping[int, NodeSpec]) -> NetworkSpec:
        nodes = list(self.nodes)
        for i, node in updates.items():
            nodes[i] = node
        return NetworkSpec(graph=self.graph, nodes=tuple(nodes), edges=self.edges)

    def require_controlled_class(self) -> None:
        if not self.partition.of(NodeClass.DIFF_CONTROLLED):
            raise InvalidModelError("controllers need at least one class-11 node")
