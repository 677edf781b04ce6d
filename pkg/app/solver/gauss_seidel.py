"""
Lexicographic Gauss-Seidel

Each sweep visits the cells in their fixed row-major order. A sweep is the
lower-triangular solve (D/omega + L) u_new = b - (U + (1 - 1/omega) D) u_old,
done by a SuperLU factorization of the triangular part with natural
ordering and diagonal pivots, so it performs exactly the sequential
cell-by-cell updates.
"""
from typing import Optional, Tuple

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from app.config.settings import settings
from app.core.logging import get_logger, log_solve_report
from app.exceptions import SingularSystemError, ValidationError
from app.models.sample import SolveReport
from app.solver.fvm import LinearOperator

logger = get_logger(__name__)


def default_max_iter(num_cells_per_side: int) -> int:
    return 200 * num_cells_per_side ** 2


class SweepFactorization:
    """Splits A into the sweep's triangular solve and the remaining upper part"""

    def __init__(self, op: LinearOperator, omega: float = 1.0):
        if not 0.0 < omega < 2.0:
            raise ValidationError("omega", f"relaxation factor must lie in (0, 2), got {omega}")

        matrix = op.to_sparse().tocsc()
        diag = matrix.diagonal()
        lower = sp.tril(matrix, k=-1)
        upper = sp.triu(matrix, k=1)

        self.matrix = matrix.tocsr()
        self.upper = (upper + sp.diags((1.0 - 1.0 / omega) * diag)).tocsr()
        self._lu = splu(
            (lower + sp.diags(diag / omega)).tocsc(),
            permc_spec="NATURAL",
            diag_pivot_thresh=0.0,
            options={"SymmetricMode": True},
        )

    def sweep(self, u: np.ndarray, b: np.ndarray) -> np.ndarray:
        return self._lu.solve(b - self.upper @ u)


def gauss_seidel(
    op: LinearOperator,
    rhs: np.ndarray,
    tol: Optional[float] = None,
    max_iter: Optional[int] = None,
    omega: float = 1.0,
    initial: Optional[np.ndarray] = None,
    pin_mean: bool = True,
) -> Tuple[np.ndarray, SolveReport]:
    """
    Solve A u = rhs by Gauss-Seidel sweeps

    Args:
        op: Assembled operator
        rhs: Right-hand side b
        tol: Relative residual target (default settings.SOLVER_TOL)
        max_iter: Sweep limit (default 200 * base_n^2)
        omega: Over-relaxation factor, 1.0 is plain Gauss-Seidel
        initial: Starting iterate (default zero)
        pin_mean: For singular (all-Neumann) systems, project rhs to mean zero
            and remove the mean of u after every sweep

    Returns:
        (u, SolveReport); non-convergence is reported, not raised

    Raises:
        SingularSystemError: Singular system with pin_mean disabled
    """
    tol = settings.SOLVER_TOL if tol is None else tol
    if tol <= 0:
        raise ValidationError("tol", f"must be positive, got {tol}")
    if max_iter is None:
        max_iter = default_max_iter(int(round(1.0 / op.spacing)))

    b = np.array(rhs, dtype=np.float64)
    if op.is_singular:
        if not pin_mean:
            raise SingularSystemError("all-Neumann system has a constant nullspace; enable mean pinning")
        logger.debug("All-Neumann system: projecting rhs to mean zero and pinning mean(u) = 0")
        b -= b.mean()

    u = np.zeros(op.size) if initial is None else np.array(initial, dtype=np.float64)
    b_norm = np.linalg.norm(b)

    if b_norm == 0.0 and not np.any(u):
        return u, SolveReport(iterations=0, final_residual=0.0, converged=True, tolerance=tol)

    scale = b_norm if b_norm > 0 else 1.0
    factorization = SweepFactorization(op, omega)
    residual_history, energy_history = [], []
    relative = np.inf

    for iteration in range(1, max_iter + 1):
        u = factorization.sweep(u, b)
        if op.is_singular:
            u -= u.mean()

        au = factorization.matrix @ u
        relative = float(np.linalg.norm(au - b) / scale)
        residual_history.append(relative)
        energy_history.append(float(0.5 * u @ au - b @ u))

        if relative <= tol:
            break

    converged = relative <= tol
    report = SolveReport(
        iterations=len(residual_history),
        final_residual=relative,
        converged=converged,
        tolerance=tol,
        residual_history=residual_history,
        energy_history=energy_history,
    )

    log_solve_report(logger, report)
    return u, report
