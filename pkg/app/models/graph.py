"""PDE graph data types"""
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

NODE_FEATURES = ("x", "y", "f", "dx", "dy")
EDGE_FEATURES = ("dx", "dy", "dist")
BOUNDARY_FEATURES = ("x", "y", "g", "dc")

F_COLUMN = NODE_FEATURES.index("f")
G_COLUMN = BOUNDARY_FEATURES.index("g")


@dataclass(frozen=True)
class PdeGraph:
    """
    Graph over the interior cells of one sample

    Edge k = (i, j) carries the message from sender j to receiver i; both
    directions of every undirected edge are stored and edges are sorted by (i, j).

    Attributes:
        node_coords: (N, 2) cell centers
        node_features: (N, 5) rows [x, y, f, dx, dy]
        edges: (E, 2) directed (receiver, sender) pairs
        edge_features: (E, 3) rows [dx, dy, |d|] of p_i - p_j
        boundary_sequence: (n_b, 4) rows [x, y, g, dc] in arc-length order
        target: (N,) solution u, NaN when unknown
    """
    node_coords: np.ndarray
    node_features: np.ndarray
    edges: np.ndarray
    edge_features: np.ndarray
    boundary_sequence: np.ndarray
    target: Optional[np.ndarray] = None

    @property
    def num_nodes(self) -> int:
        return len(self.node_features)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def with_column(self, table: str, column: int, value: float) -> "PdeGraph":
        """Copy with one column of node_features or boundary_sequence overwritten"""
        data = getattr(self, table).copy()
        data[:, column] = value
        return replace(self, **{table: data})


@dataclass(frozen=True)
class BranchInputs:
    """
    Per-branch copies of a graph

    branch1 sees g = 0 (interior/source branch), branch2 sees f = 0
    (boundary branch); full is the unmodified graph used by the single-branch variant.
    """
    full: PdeGraph
    branch1: PdeGraph
    branch2: PdeGraph

    @classmethod
    def from_graph(cls, graph: PdeGraph) -> "BranchInputs":
        return cls(
            full=graph,
            branch1=graph.with_column("boundary_sequence", G_COLUMN, 0.0),
            branch2=graph.with_column("node_features", F_COLUMN, 0.0),
        )
