"""Tests for graphs, incidence/Laplacian operators and node partitions."""

import numpy as np
import pytest

from phnet.errors import InvalidModelError
from phnet.graph import (
    Graph,
    NodeClass,
    NodePartition,
    incidence_matrix,
    induced_subgraph,
    is_acyclic,
    laplacian,
    row_block,
)


def test_incidence_path():
    g = Graph.from_pairs(3, [(1, 2), (2, 3)])
    assert incidence_matrix(g).tolist() == [[1, 0], [-1, 1], [0, -1]]


def test_incidence_columns_sum_to_zero():
    g = Graph.from_pairs(4, [(1, 2), (2, 3), (3, 4), (4, 1), (1, 3)])
    B = incidence_matrix(g)
    assert np.all(B.sum(axis=0) == 0)
    assert np.all(np.sum(np.abs(B), axis=0) == 2)


def test_laplacian_triangle():
    g = Graph.from_pairs(3, [(1, 2), (2, 3), (3, 1)])
    L = laplacian(g)
    assert L.tolist() == [[2, -1, -1], [-1, 2, -1], [-1, -1, 2]]
    assert np.allclose(L @ np.ones(3), 0)


def test_single_node_graph():
    g = Graph(num_nodes=1)
    assert incidence_matrix(g).shape == (1, 0)
    assert is_acyclic(g)


def test_tree_and_cycle():
    assert is_acyclic(Graph.from_pairs(3, [(1, 2), (2, 3)]))
    assert not is_acyclic(Graph.from_pairs(3, [(1, 2), (2, 3), (3, 1)]))


@pytest.mark.parametrize(
    "pairs, message",
    [
        ([(1, 2), (2, 2)], "self-loop"),
        ([(1, 2), (2, 1)], "duplicate"),
        ([(1, 4)], "unknown node"),
        ([(1, 2)], "not connected"),
    ],
)
def test_invalid_graphs(pairs, message):
    with pytest.raises(InvalidModelError, match=message):
        Graph.from_pairs(3, pairs)


def test_pairs_are_one_based():
    g = Graph.from_pairs(3, [(1, 2), (3, 2)])
    assert g.edges == ((0, 1), (2, 1))
    assert g.pairs() == [(1, 2), (3, 2)]


def test_induced_subgraph_relabels():
    g = Graph.from_pairs(4, [(1, 2), (2, 3), (3, 4)])
    sub = induced_subgraph(g, [1, 2, 3])
    assert sub.num_nodes == 3
    assert sub.edges == ((0, 1), (1, 2))


def test_induced_subgraph_must_stay_connected():
    g = Graph.from_pairs(4, [(1, 2), (2, 3), (3, 4)])
    with pytest.raises(InvalidModelError, match="not connected"):
        induced_subgraph(g, [0, 2, 3])


def test_partition_indices():
    p = NodePartition.from_labels([11, 22, 12, 21, 11])
    assert p.differential == (0, 2, 4)
    assert p.algebraic == (1, 3)
    assert p.controlled == (0, 3, 4)
    assert p.of(NodeClass.ALG_FREE) == (1,)
    assert p.of() == ()


def test_partition_rejects_unknown_label():
    with pytest.raises(InvalidModelError, match="unknown node class"):
        NodePartition.from_labels([11, 13])


def test_partition_replace():
    p = NodePartition.from_labels([11, 21])
    q = p.replace({0: NodeClass.DIFF_FREE})
    assert q.controlled == (1,)
    assert p.controlled == (0, 1)


def test_without_control():
    assert NodeClass(11).without_control() is NodeClass.DIFF_FREE
    assert NodeClass(21).without_control() is NodeClass.ALG_FREE
    assert NodeClass(22).without_control() is NodeClass.ALG_FREE


def test_row_block_keeps_order_and_may_be_empty():
    g = Graph.from_pairs(3, [(1, 2), (2, 3)])
    B = incidence_matrix(g)
    p = NodePartition.from_labels([22, 11, 22])
    assert row_block(B, p, NodeClass.ALG_FREE).tolist() == [[1, 0], [0, -1]]
    assert row_block(B, p, NodeClass.ALG_CONTROLLED).shape == (0, 2)
