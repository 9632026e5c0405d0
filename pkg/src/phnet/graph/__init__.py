"""Undirected graph algebra: incidence, class row blocks, Laplacians."""

from phnet.graph.structure import (
    Graph,
    NodeClass,
    NodePartition,
    incidence_matrix,
    induced_subgraph,
    is_acyclic,
    laplacian,
    row_block,
)

__all__ = [
    "Graph",
    "NodeClass",
    "NodePartition",
    "incidence_matrix",
    "induced_subgraph",
    "is_acyclic",
    "laplacian",
    "row_block",
]
