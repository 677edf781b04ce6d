"""
Cell-centered finite-volume assembly of the Poisson operator

The system is kept in its symmetric positive (semi-)definite form
A = -lap_h, so A u = b with b = -f + boundary contribution. Coefficients are
stored as integers in units of 1/h^2 and divided only when applied.

Face fluxes per unit face:
    interior:  (u_nbr - u_c) / h
    dirichlet: 2 (g - u_c) / h      (face value at half-cell distance)
    neumann:   g                    (prescribed outward normal derivative)
"""
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.sparse as sp

from app.core.logging import get_logger
from app.exceptions import ShapeMismatchError, ValidationError
from app.models.domain import Domain
from app.models.sample import BC_KINDS

logger = get_logger(__name__)

# left, right, down, up in (col, row) offsets
NEIGHBOR_OFFSETS = ((-1, 0), (1, 0), (0, -1), (0, 1))


@dataclass(frozen=True)
class LinearOperator:
    """
    Matrix-free stencil of A = -lap_h over the interior cells

    Attributes:
        neighbors: (N, 4) neighbor cell index per direction, -1 for a boundary face
        diag_units: (N,) diagonal coefficient in units of 1/h^2
        boundary_faces: (N,) number of boundary faces per cell
        boundary_rhs: (N,) contribution of g to b
    """
    bc_kind: str
    spacing: float
    neighbors: np.ndarray
    diag_units: np.ndarray
    boundary_faces: np.ndarray
    boundary_rhs: np.ndarray

    @property
    def size(self) -> int:
        return len(self.diag_units)

    @property
    def offdiag_units(self) -> np.ndarray:
        """Sum of |off-diagonal| coefficients per row, units of 1/h^2"""
        return (self.neighbors >= 0).sum(axis=1)

    @property
    def is_singular(self) -> bool:
        """All-Neumann systems have the constants as nullspace"""
        return self.bc_kind == "neumann"

    def apply(self, u: np.ndarray) -> np.ndarray:
        """A u"""
        u = np.asarray(u, dtype=np.float64)
        if u.shape != (self.size,):
            raise ShapeMismatchError(f"operator of size {self.size} applied to shape {u.shape}")
        # index -1 picks the appended zero
        padded = np.append(u, 0.0)
        return (self.diag_units * u - padded[self.neighbors].sum(axis=1)) / self.spacing ** 2

    def laplacian(self, u: np.ndarray) -> np.ndarray:
        """lap_h u = -A u"""
        return -self.apply(u)

    def rhs(self, f: np.ndarray) -> np.ndarray:
        """Right-hand side b = -f + boundary contribution"""
        f = np.asarray(f, dtype=np.float64)
        if f.shape != (self.size,):
            raise ShapeMismatchError(f"source of shape {f.shape} for {self.size} cells")
        return -f + self.boundary_rhs

    def residual(self, u: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self.apply(u) - b

    def to_sparse(self) -> sp.csr_matrix:
        """Assembled CSR matrix of A"""
        n = self.size
        inv_h2 = 1.0 / self.spacing ** 2
        rows, cols = np.nonzero(self.neighbors >= 0)
        data = np.concatenate([self.diag_units * inv_h2, -np.ones(len(rows)) * inv_h2])
        row_idx = np.concatenate([np.arange(n), rows])
        col_idx = np.concatenate([np.arange(n), self.neighbors[rows, cols]])
        return sp.csr_matrix((data, (row_idx, col_idx)), shape=(n, n))


def assemble_operator(domain: Domain, bc_kind: str = "dirichlet", g: Optional[np.ndarray] = None) -> LinearOperator:
    """
    Assemble the finite-volume operator for a domain

    Args:
        domain: Domain
        bc_kind: "dirichlet" or "neumann"
        g: Boundary values per interface (defaults to domain.boundary.values)

    Returns:
        LinearOperator
    """
    if bc_kind not in BC_KINDS:
        raise ValidationError("bc_kind", f"must be one of {BC_KINDS}, got '{bc_kind}'")

    g = domain.boundary.values if g is None else np.asarray(g, dtype=np.float64)
    if g.shape != (len(domain.boundary),):
        raise ShapeMismatchError(f"{g.shape} boundary values for {len(domain.boundary)} interfaces")

    n = domain.base_n
    h = domain.spacing
    cols, rows = domain.cell_ij[:, 0], domain.cell_ij[:, 1]

    neighbors = np.full((domain.num_cells, 4), -1, dtype=np.int64)
    for k, (dc, dr) in enumerate(NEIGHBOR_OFFSETS):
        nc, nr = cols + dc, rows + dr
        inside = (nc >= 0) & (nc < n) & (nr >= 0) & (nr < n)
        idx = np.full(domain.num_cells, -1, dtype=np.int64)
        idx[inside] = domain.cell_index[nr[inside], nc[inside]]
        neighbors[:, k] = idx

    boundary_cells = domain.boundary.cells
    boundary_faces = np.bincount(boundary_cells, minlength=domain.num_cells)
    n_neighbors = (neighbors >= 0).sum(axis=1)
    if np.any(n_neighbors + boundary_faces != 4):
        raise ValidationError("domain", "boundary trace does not close every cell")

    if bc_kind == "dirichlet":
        diag_units = n_neighbors + 2 * boundary_faces
        boundary_rhs = np.bincount(boundary_cells, weights=2.0 * g / h ** 2, minlength=domain.num_cells)
    else:
        diag_units = n_neighbors
        boundary_rhs = np.bincount(boundary_cells, weights=g / h, minlength=domain.num_cells)

    return LinearOperator(
        bc_kind=bc_kind,
        spacing=h,
        neighbors=neighbors,
        diag_units=diag_units.astype(np.int64),
        boundary_faces=boundary_faces,
        boundary_rhs=boundary_rhs,
    )
