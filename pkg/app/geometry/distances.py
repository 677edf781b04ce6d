"""Axis-ray distances from interior cells to the boundary"""
from typing import Tuple

import numpy as np

from app.models.domain import Domain


def _run_lengths(mask: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Count consecutive in-domain cells before/after each cell along axis 1"""
    n_rows, n_cols = mask.shape
    before = np.zeros(mask.shape, dtype=np.int64)
    after = np.zeros(mask.shape, dtype=np.int64)

    for col in range(1, n_cols):
        before[:, col] = np.where(mask[:, col - 1], before[:, col - 1] + 1, 0)
    for col in range(n_cols - 2, -1, -1):
        after[:, col] = np.where(mask[:, col + 1], after[:, col + 1] + 1, 0)

    return before, after


def interior_boundary_distances(domain: Domain) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Distances used as geometric node and boundary features

    Args:
        domain: Domain

    Returns:
        (dx, dy, dc): dx/dy per interior cell are the distances from the cell
        center to the first boundary face along the x/y axis (minimum of the
        two directions); dc per boundary interface is the Euclidean distance
        from its midpoint to the centroid of the interior cell centers.
    """
    h = domain.spacing
    cols, rows = domain.cell_ij[:, 0], domain.cell_ij[:, 1]

    left, right = _run_lengths(domain.mask)
    below, above = _run_lengths(domain.mask.T)

    steps_x = np.minimum(left[rows, cols], right[rows, cols])
    steps_y = np.minimum(below[cols, rows], above[cols, rows])
    dx = (steps_x + 0.5) * h
    dy = (steps_y + 0.5) * h

    centroid = domain.interior_cells.mean(axis=0)
    dc = np.linalg.norm(domain.boundary.midpoints - centroid, axis=1)

    return dx, dy, dc
