"""
Bowyer-Watson Delaunay triangulation

Points are scaled into the unit box and inserted one at a time into a large
super-triangle. A point on a circumcircle counts as outside, so co-circular
configurations are resolved afterwards by flipping every co-circular diagonal
to the one with the lexicographically smaller endpoint pair.
"""
from typing import Dict, List, Tuple

import numpy as np

from app.core.logging import get_logger
from app.exceptions import DegenerateGeometryError

logger = get_logger(__name__)

SUPER_TRIANGLE = np.array([[0.5 - 20.0, -10.0], [0.5 + 20.0, -10.0], [0.5, 30.0]])
CIRCLE_TOL = 1e-10
COLLINEAR_TOL = 1e-12


def _circumcircles(verts: np.ndarray, tris: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    a, b, c = verts[tris[:, 0]], verts[tris[:, 1]], verts[tris[:, 2]]
    d = 2.0 * (a[:, 0] * (b[:, 1] - c[:, 1]) + b[:, 0] * (c[:, 1] - a[:, 1]) + c[:, 0] * (a[:, 1] - b[:, 1]))
    a2, b2, c2 = (a ** 2).sum(1), (b ** 2).sum(1), (c ** 2).sum(1)
    ux = (a2 * (b[:, 1] - c[:, 1]) + b2 * (c[:, 1] - a[:, 1]) + c2 * (a[:, 1] - b[:, 1])) / d
    uy = (a2 * (c[:, 0] - b[:, 0]) + b2 * (a[:, 0] - c[:, 0]) + c2 * (b[:, 0] - a[:, 0])) / d
    centers = np.stack([ux, uy], axis=1)
    return centers, ((a - centers) ** 2).sum(1)


def _validate(points: np.ndarray) -> np.ndarray:
    pts = np.asarray(points, dtype=np.float64)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise DegenerateGeometryError(f"expected (N, 2) points, got shape {pts.shape}")
    if len(pts) < 3:
        raise DegenerateGeometryError(f"need at least 3 points, got {len(pts)}")
    if len(np.unique(pts, axis=0)) != len(pts):
        raise DegenerateGeometryError("duplicate points")

    rel = pts - pts[0]
    far = rel[np.argmax((rel ** 2).sum(1))]
    cross = rel[:, 0] * far[1] - rel[:, 1] * far[0]
    if np.abs(cross).max() <= COLLINEAR_TOL * (far ** 2).sum():
        raise DegenerateGeometryError("all points are collinear")
    return pts


def delaunay(points: np.ndarray) -> np.ndarray:
    """
    Delaunay triangulation of a planar point set

    Args:
        points: (N, 2) coordinates, N >= 3, not all collinear, no duplicates

    Returns:
        (T, 3) vertex indices, each row sorted ascending, rows sorted lexicographically

    Raises:
        DegenerateGeometryError: Too few, duplicate or collinear points
    """
    pts = _validate(points)
    n = len(pts)

    lo = pts.min(axis=0)
    span = (pts.max(axis=0) - lo).max()
    verts = np.vstack([(pts - lo) / span, SUPER_TRIANGLE])

    tris = np.array([[n, n + 1, n + 2]], dtype=np.int64)
    centers, radii2 = _circumcircles(verts, tris)

    for p in range(n):
        d2 = ((centers - verts[p]) ** 2).sum(axis=1)
        bad = d2 < radii2 * (1.0 - CIRCLE_TOL)

        counts: Dict[Tuple[int, int], int] = {}
        directed: List[Tuple[int, int]] = []
        for a, b, c in tris[bad]:
            for u, v in ((a, b), (b, c), (c, a)):
                key = (min(u, v), max(u, v))
                counts[key] = counts.get(key, 0) + 1
                directed.append((u, v))

        # cavity edges keep their counterclockwise direction, so (u, v, p) stays counterclockwise
        new = np.array(
            [(u, v, p) for u, v in directed if counts[(min(u, v), max(u, v))] == 1],
            dtype=np.int64,
        )
        new_centers, new_radii2 = _circumcircles(verts, new)

        keep = ~bad
        tris = np.vstack([tris[keep], new])
        centers = np.vstack([centers[keep], new_centers])
        radii2 = np.concatenate([radii2[keep], new_radii2])

    tris = tris[(tris < n).all(axis=1)]
    tris = _break_cocircular_ties(verts, tris)

    tris = np.sort(tris, axis=1)
    tris = tris[np.lexsort(tris.T[::-1])]
    logger.debug(f"Delaunay: {n} points -> {len(tris)} triangles")
    return tris


def _break_cocircular_ties(verts: np.ndarray, tris: np.ndarray) -> np.ndarray:
    """Flip co-circular diagonals towards the lexicographically smaller endpoint pair"""
    tris = [tuple(int(v) for v in t) for t in tris]
    max_passes = 10 * len(tris) + 10

    for _ in range(max_passes):
        owners: Dict[Tuple[int, int], List[int]] = {}
        for t, tri in enumerate(tris):
            for k in range(3):
                u, v = tri[k], tri[(k + 1) % 3]
                owners.setdefault((min(u, v), max(u, v)), []).append(t)

        touched = set()
        flips = 0
        for (a, b), shared in sorted(owners.items()):
            if len(shared) != 2 or shared[0] in touched or shared[1] in touched:
                continue
            t1, t2 = shared
            c = next(v for v in tris[t1] if v not in (a, b))
            d = next(v for v in tris[t2] if v not in (a, b))
            if (min(c, d), max(c, d)) >= (a, b):
                continue

            center, r2 = _circumcircles(verts, np.array([tris[t1]]))
            dist2 = ((verts[d] - center[0]) ** 2).sum()
            if abs(dist2 - r2[0]) > CIRCLE_TOL * r2[0]:
                continue

            # keep counterclockwise orientation: t1 lists (a, b) or (b, a) in order
            i = tris[t1].index(c)
            p, q = tris[t1][(i + 1) % 3], tris[t1][(i + 2) % 3]
            tris[t1] = (c, p, d)
            tris[t2] = (c, d, q)
            touched.update((t1, t2))
            flips += 1

        if flips == 0:
            break

    return np.array(tris, dtype=np.int64)


def triangle_edges(triangles: np.ndarray) -> np.ndarray:
    """Unique undirected edges (i < j) of a triangle list, sorted"""
    tris = np.asarray(triangles, dtype=np.int64)
    pairs = np.concatenate([tris[:, [0, 1]], tris[:, [1, 2]], tris[:, [0, 2]]])
    pairs = np.sort(pairs, axis=1)
    return np.unique(pairs, axis=0)
