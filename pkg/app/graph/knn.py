"""K-nearest-neighbour edges with deterministic tie-breaking"""
import numpy as np

from app.exceptions import ParameterError

# distances are compared after rounding so float noise cannot reorder ties
DISTANCE_DECIMALS = 12
ROW_CHUNK = 512


def knn_edges(points: np.ndarray, k: int) -> np.ndarray:
    """
    Symmetrized K-nearest-neighbour edge set

    Each node links to its k nearest other nodes by Euclidean distance, equal
    distances going to the smaller node index; the result is the union of
    those pairs with their reverses.

    Args:
        points: (N, 2) coordinates
        k: Neighbours per node, 1 <= k < N

    Returns:
        (E, 2) directed pairs sorted lexicographically, both directions present

    Raises:
        ParameterError: k outside [1, N)
    """
    pts = np.asarray(points, dtype=np.float64)
    n = len(pts)
    if not 1 <= k < n:
        raise ParameterError("K", f"must satisfy 1 <= K < N={n}, got {k}")

    neighbours = np.empty((n, k), dtype=np.int64)
    for start in range(0, n, ROW_CHUNK):
        rows = np.arange(start, min(start + ROW_CHUNK, n))
        dist = np.sqrt(((pts[rows, None, :] - pts[None, :, :]) ** 2).sum(axis=2))
        dist = np.round(dist, DISTANCE_DECIMALS)
        dist[np.arange(len(rows)), rows] = np.inf

        index = np.broadcast_to(np.arange(n), dist.shape)
        order = np.lexsort((index, dist), axis=-1)
        neighbours[rows] = order[:, :k]

    receivers = np.repeat(np.arange(n), k)
    senders = neighbours.ravel()
    pairs = np.concatenate([
        np.stack([receivers, senders], axis=1),
        np.stack([senders, receivers], axis=1),
    ])
    return np.unique(pairs, axis=0)
