"""Graph and node-partition value types with their matrix operators."""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from enum import IntEnum

import networkx as nx
import numpy as np

from phnet.errors import InvalidModelError


class NodeClass(IntEnum):
    """Node class label: first digit differential(1)/algebraic(2), second controlled(1)/not(2)."""

    DIFF_CONTROLLED = 11
    DIFF_FREE = 12
    ALG_CONTROLLED = 21
    ALG_FREE = 22

    @property
    def is_differential(self) -> bool:
        return self in (NodeClass.DIFF_CONTROLLED, NodeClass.DIFF_FREE)

    @property
    def is_controlled(self) -> bool:
        return self in (NodeClass.DIFF_CONTROLLED, NodeClass.ALG_CONTROLLED)

    def without_control(self) -> NodeClass:
        return NodeClass.DIFF_FREE if self.is_differential else NodeClass.ALG_FREE


@dataclass(frozen=True)
class Graph:
    """Connected undirected graph; edges are 0-based pairs whose order fixes orientation."""

    num_nodes: int
    edges: tuple[tuple[int, int], ...] = ()

    def __post_init__(self) -> None:
        if self.num_nodes < 1:
            raise InvalidModelError(f"graph needs at least one node, got {self.num_nodes}")
        seen: set[frozenset[int]] = set()
        for k, (i, j) in enumerate(self.edges):
            if not (0 <= i < self.num_nodes and 0 <= j < self.num_nodes):
                raise InvalidModelError(f"edge {k + 1} ({i + 1}, {j + 1}) references unknown node")
            if i == j:
                raise InvalidModelError(f"edge {k + 1} is a self-loop at node {i + 1}")
            key = frozenset((i, j))
            if key in seen:
                raise InvalidModelError(f"edge {k + 1} ({i + 1}, {j + 1}) is a duplicate")
            seen.add(key)
        if not nx.is_connected(self.to_networkx()):
            raise InvalidModelError("graph is not connected")

    @classmethod
    def from_pairs(cls, num_nodes: int, pairs: Iterable[Sequence[int]]) -> Graph:
        """Build from 1-based node pairs as written in scenario files."""
        edges = tuple((int(p[0]) - 1, int(p[1]) - 1) for p in pairs)
        return cls(num_nodes=num_nodes, edges=edges)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def to_networkx(self) -> nx.Graph:
        g = nx.Graph()
        g.add_nodes_from(range(self.num_nodes))
        g.add_edges_from(self.edges)
        return g

    def pairs(self) -> list[tuple[int, int]]:
        """Edges as 1-based pairs."""
        return [(i + 1, j + 1) for i, j in self.edges]


def incidence_matrix(g: Graph) -> np.ndarray:
    """Oriented incidence: +1 at the first node of each edge, -1 at the second."""
    B = np.zeros((g.num_nodes, g.num_edges), dtype=np.float64)
    for k, (i, j) in enumerate(g.edges):
        B[i, k] = 1.0
        B[j, k] = -1.0
    return B


def laplacian(g: Graph) -> np.ndarray:
    B = incidence_matrix(g)
    return B @ B.T


def is_acyclic(g: Graph) -> bool:
    # Graph construction guarantees connectivity, so a tree is exactly M = N - 1.
    return g.num_edges == g.num_nodes - 1


def induced_subgraph(g: Graph, nodes: Sequence[int]) -> Graph:
    """Subgraph on ``nodes`` (0-based, order kept), relabelled 0..len-1."""
    index = {node: k for k, node in enumerate(nodes)}
    edges = tuple(
        (index[i], index[j]) for i, j in g.edges if i in index and j in index
    )
    return Graph(num_nodes=len(nodes), edges=edges)


@dataclass(frozen=True)
class NodePartition:
    """Assignment of every node to one of the four classes."""

    classes: tuple[NodeClass, ...]
    _by_class: Mapping[NodeClass, tuple[int, ...]] = field(
        init=False, repr=False, compare=False
    )

    def __post_init__(self) -> None:
        groups: dict[NodeClass, list[int]] = {c: [] for c in NodeClass}
        for i, c in enumerate(self.classes):
            groups[NodeClass(c)].append(i)
        object.__setattr__(
            self, "_by_class", {c: tuple(v) for c, v in groups.items()}
        )

    @classmethod
    def from_labels(cls, labels: Iterable[int]) -> NodePartition:
        try:
            return cls(classes=tuple(NodeClass(int(label)) for label in labels))
        except ValueError as exc:
            raise InvalidModelError(f"unknown node class: {exc}") from exc

    @property
    def num_nodes(self) -> int:
        return len(self.classes)

    def of(self, *classes: NodeClass) -> tuple[int, ...]:
        """Node indices in any of ``classes``, ascending."""
        if not classes:
            return ()
        return tuple(sorted(i for c in classes for i in self._by_class[NodeClass(c)]))

    @property
    def differential(self) -> tuple[int, ...]:
        return self.of(NodeClass.DIFF_CONTROLLED, NodeClass.DIFF_FREE)

    @property
    def algebraic(self) -> tuple[int, ...]:
        return self.of(NodeClass.ALG_CONTROLLED, NodeClass.ALG_FREE)

    @property
    def controlled(self) -> tuple[int, ...]:
        return self.of(NodeClass.DIFF_CONTROLLED, NodeClass.ALG_CONTROLLED)

    def replace(self, updates: Mapping[int, NodeClass]) -> NodePartition:
        classes = list(self.classes)
        for i, c in updates.items():
            classes[i] = NodeClass(c)
        return NodePartition(classes=tuple(classes))


def row_block(B: np.ndarray, partition: NodePartition, *classes: NodeClass) -> np.ndarray:
    """Rows of B for the nodes in ``classes``, original order kept; may be 0 x M."""
    rows = list(partition.of(*classes))
    return B[rows, :]
