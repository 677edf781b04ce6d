"""Domain, boundary and source-field data types"""
from dataclasses import dataclass, field, replace
from typing import Dict, Literal, Tuple

import numpy as np


CORNERS: Tuple[str, ...] = ("bottom_left", "bottom_right", "top_right", "top_left")

SourceFamily = Literal["sinusoidal", "exponential", "logarithmic", "polynomial", "custom"]


@dataclass(frozen=True)
class BoundarySet:
    """
    Boundary interfaces traced counterclockwise

    Attributes:
        midpoints: (n_b, 2) interface midpoints in domain-length units
        normals: (n_b, 2) outward unit normals (axis aligned)
        arc_length: (n_b,) arc-length coordinate of each midpoint, strictly increasing
        cells: (n_b,) index of the interior cell on the inward side
        values: (n_b,) boundary values g (zeros until sampled)
        perimeter: total trace length
    """
    midpoints: np.ndarray
    normals: np.ndarray
    arc_length: np.ndarray
    cells: np.ndarray
    values: np.ndarray
    perimeter: float

    def __len__(self) -> int:
        return len(self.arc_length)

    def with_values(self, values: np.ndarray) -> "BoundarySet":
        values = np.asarray(values, dtype=np.float64)
        if values.shape != self.arc_length.shape:
            raise ValueError(f"expected {self.arc_length.shape} boundary values, got {values.shape}")
        return replace(self, values=values)


@dataclass(frozen=True)
class Domain:
    """
    Corner-cut square of base_n x base_n cells mapped to the unit square

    Interior cells are ordered row-major by grid row then column, i.e. by (y, x).
    """
    base_n: int
    spacing: float
    cut_specs: Dict[str, int]
    mask: np.ndarray           # (base_n, base_n) bool, indexed [row, col]
    cell_index: np.ndarray     # (base_n, base_n) int, -1 outside the domain
    cell_ij: np.ndarray        # (N, 2) int (col, row) of each interior cell
    interior_cells: np.ndarray  # (N, 2) cell-center coordinates
    vertices: np.ndarray       # (V, 2) polygon vertices, counterclockwise
    boundary: BoundarySet

    @property
    def num_cells(self) -> int:
        return len(self.interior_cells)

    @property
    def n_corners(self) -> int:
        return sum(1 for s in self.cut_specs.values() if s > 0)

    def with_boundary(self, boundary: BoundarySet) -> "Domain":
        return replace(self, boundary=boundary)


@dataclass(frozen=True)
class SourceField:
    """Source term f evaluated at every interior cell center"""
    values: np.ndarray
    family: SourceFamily
    coefficients: Dict[str, object] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.values)
