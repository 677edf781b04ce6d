"""
Corner-cut square domains

A domain is a base_n x base_n cell grid on the unit square with up to four
axis-aligned square notches removed from its corners. The boundary is the
rectilinear polygon around the remaining cells, traced counterclockwise from
its lexicographically smallest vertex and split into one interface per cell face.
"""
from typing import Dict, List, Optional, Tuple

import numpy as np

from app.core.logging import get_logger
from app.exceptions import ValidationError
from app.models.domain import CORNERS, BoundarySet, Domain

logger = get_logger(__name__)

MIN_GENERATED_BASE_N = 8


def max_cut_size(base_n: int) -> int:
    """Largest corner cut that keeps neighbouring cuts apart"""
    return base_n // 2 - 1


def generate_domain(base_n: int, n_corners: int, seed: int) -> Domain:
    """
    Sample a corner-cut domain

    Args:
        base_n: Cells per side (>= 8)
        n_corners: Number of corners to cut (0..4)
        seed: Seed; identical arguments give an identical domain

    Returns:
        Domain with exactly n_corners cut corners, sizes uniform in [1, base_n/2 - 1]

    Raises:
        ValidationError: base_n < 8 or n_corners outside 0..4
    """
    if base_n < MIN_GENERATED_BASE_N:
        raise ValidationError("base_n", f"must be >= {MIN_GENERATED_BASE_N}, got {base_n}")
    if not 0 <= n_corners <= 4:
        raise ValidationError("n_corners", f"must be in 0..4, got {n_corners}")

    rng = np.random.default_rng(seed)
    chosen = sorted(int(c) for c in rng.choice(4, size=n_corners, replace=False))
    cuts = {name: 0 for name in CORNERS}
    for corner in chosen:
        cuts[CORNERS[corner]] = int(rng.integers(1, max_cut_size(base_n), endpoint=True))

    logger.debug(f"Domain base_n={base_n} cuts={cuts} (seed={seed})")
    return build_domain(base_n, cuts)


def build_domain(base_n: int, cut_specs: Optional[Dict[str, int]] = None) -> Domain:
    """
    Build a domain from explicit corner cut sizes

    Args:
        base_n: Cells per side (>= 2)
        cut_specs: Mapping corner name -> cut size in cells (missing or 0 = uncut)

    Returns:
        Domain

    Raises:
        ValidationError: Unknown corner name or cut size outside [1, base_n/2 - 1]
    """
    if base_n < 2:
        raise ValidationError("base_n", f"must be >= 2, got {base_n}")

    cuts = {name: 0 for name in CORNERS}
    for name, size in (cut_specs or {}).items():
        if name not in cuts:
            raise ValidationError("cut_specs", f"unknown corner '{name}'")
        size = int(size)
        if size != 0 and not 1 <= size <= max_cut_size(base_n):
            raise ValidationError(
                "cut_specs", f"{name} cut {size} outside [1, {max_cut_size(base_n)}]"
            )
        cuts[name] = size

    n = base_n
    h = 1.0 / n

    mask = np.ones((n, n), dtype=bool)
    s = cuts["bottom_left"]
    mask[:s, :s] = False
    s = cuts["bottom_right"]
    mask[:s, n - s:] = False
    s = cuts["top_right"]
    mask[n - s:, n - s:] = False
    s = cuts["top_left"]
    mask[n - s:, :s] = False

    rows, cols = np.nonzero(mask)
    cell_index = np.full((n, n), -1, dtype=np.int64)
    cell_index[rows, cols] = np.arange(len(rows))
    cell_ij = np.stack([cols, rows], axis=1).astype(np.int64)
    centers = (cell_ij + 0.5) * h

    vertices = _polygon_vertices(n, cuts)
    boundary = _trace_boundary(vertices, cell_index, h)
    mask.setflags(write=False)
    cell_index.setflags(write=False)

    return Domain(
        base_n=n,
        spacing=h,
        cut_specs=cuts,
        mask=mask,
        cell_index=cell_index,
        cell_ij=cell_ij,
        interior_cells=centers,
        vertices=np.asarray(vertices, dtype=np.float64) * h,
        boundary=boundary,
    )


def _polygon_vertices(n: int, cuts: Dict[str, int]) -> List[Tuple[int, int]]:
    """Counterclockwise polygon vertices in cell units, starting at the lexicographically smallest"""
    vertices: List[Tuple[int, int]] = []

    s = cuts["bottom_left"]
    vertices += [(0, s), (s, s), (s, 0)] if s else [(0, 0)]
    s = cuts["bottom_right"]
    vertices += [(n - s, 0), (n - s, s), (n, s)] if s else [(n, 0)]
    s = cuts["top_right"]
    vertices += [(n, n - s), (n - s, n - s), (n - s, n)] if s else [(n, n)]
    s = cuts["top_left"]
    vertices += [(s, n), (s, n - s), (0, n - s)] if s else [(0, n)]

    return vertices


def _trace_boundary(vertices: List[Tuple[int, int]], cell_index: np.ndarray, h: float) -> BoundarySet:
    midpoints, normals, cells = [], [], []

    for k, (ax, ay) in enumerate(vertices):
        bx, by = vertices[(k + 1) % len(vertices)]
        dx, dy = int(np.sign(bx - ax)), int(np.sign(by - ay))
        length = abs(bx - ax) + abs(by - ay)
        # outward normal is the right-hand side of a counterclockwise trace
        nx, ny = dy, -dx
        for step in range(length):
            mx = ax + dx * (step + 0.5)
            my = ay + dy * (step + 0.5)
            col = int(round(mx - 0.5 * nx - 0.5))
            row = int(round(my - 0.5 * ny - 0.5))
            midpoints.append((mx, my))
            normals.append((nx, ny))
            cells.append(cell_index[row, col])

    count = len(midpoints)
    return BoundarySet(
        midpoints=np.asarray(midpoints, dtype=np.float64) * h,
        normals=np.asarray(normals, dtype=np.float64),
        arc_length=(np.arange(count, dtype=np.float64) + 0.5) * h,
        cells=np.asarray(cells, dtype=np.int64),
        values=np.zeros(count),
        perimeter=count * h,
    )
