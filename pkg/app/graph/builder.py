"""PDE graph construction: Delaunay mesh edges united with KNN edges"""
from typing import Optional, Tuple

import numpy as np

from app.config.settings import settings
from app.core.logging import get_logger
from app.geometry.distances import interior_boundary_distances
from app.graph.delaunay import delaunay, triangle_edges
from app.graph.knn import knn_edges
from app.models.graph import BranchInputs, PdeGraph
from app.models.sample import SolutionSample

logger = get_logger(__name__)


def mesh_edges(points: np.ndarray) -> np.ndarray:
    """Directed Delaunay edges, both directions, sorted"""
    undirected = triangle_edges(delaunay(points))
    return np.unique(np.concatenate([undirected, undirected[:, ::-1]]), axis=0)


def union_edges(*edge_sets: np.ndarray) -> np.ndarray:
    return np.unique(np.concatenate(edge_sets), axis=0)


def build_graph(sample: SolutionSample, k: Optional[int] = None) -> Tuple[PdeGraph, BranchInputs]:
    """
    Build the graph and its per-branch input copies for a sample

    Nodes are the interior cells only; the boundary enters through the
    boundary sequence [x, y, g, dc] in trace order.

    Args:
        sample: Solved or unsolved sample
        k: KNN neighbour count (default settings.KNN_K)

    Returns:
        (PdeGraph, BranchInputs)
    """
    k = settings.KNN_K if k is None else k
    domain = sample.domain
    coords = domain.interior_cells

    dx, dy, dc = interior_boundary_distances(domain)
    node_features = np.column_stack([coords, sample.f, dx, dy])

    edges = union_edges(mesh_edges(coords), knn_edges(coords, k))
    delta = coords[edges[:, 0]] - coords[edges[:, 1]]
    edge_features = np.column_stack([delta, np.linalg.norm(delta, axis=1)])

    boundary = domain.boundary
    boundary_sequence = np.column_stack([boundary.midpoints, boundary.values, dc])

    graph = PdeGraph(
        node_coords=coords.copy(),
        node_features=node_features,
        edges=edges,
        edge_features=edge_features,
        boundary_sequence=boundary_sequence,
        target=np.array(sample.u, dtype=np.float64),
    )
    logger.debug(f"Graph: {graph.num_nodes} nodes, {graph.num_edges} directed edges, K={k}")
    return graph, BranchInputs.from_graph(graph)
