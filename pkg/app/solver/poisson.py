"""
Poisson solves and solver-exact property checks

Besides the composed assemble + solve, this module hosts the discrete
Green's-function oracle, the superposition check, and the order-of-accuracy
and maximum-principle helpers used by `green-check`.
"""
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from app.core.logging import get_logger
from app.exceptions import SolverConvergenceError, ValidationError
from app.geometry.domain_gen import build_domain
from app.models.domain import Domain, SourceField
from app.models.sample import SolutionSample
from app.solver.fvm import assemble_operator
from app.solver.gauss_seidel import gauss_seidel

logger = get_logger(__name__)

FieldLike = Union[SourceField, np.ndarray]


def _source_values(f: FieldLike) -> np.ndarray:
    return np.asarray(f.values if isinstance(f, SourceField) else f, dtype=np.float64)


def relative_l2(numerator: np.ndarray, reference: np.ndarray) -> float:
    """||numerator|| / ||reference||, 0 when the numerator vanishes"""
    top = float(np.linalg.norm(numerator))
    if top == 0.0:
        return 0.0
    return top / float(np.linalg.norm(reference))


def solve_field(
    domain: Domain,
    f: FieldLike,
    g: Optional[np.ndarray] = None,
    bc_kind: str = "dirichlet",
    tol: Optional[float] = None,
    max_iter: Optional[int] = None,
):
    """Assemble and solve, returning (u, SolveReport) without raising on non-convergence"""
    op = assemble_operator(domain, bc_kind, g)
    return gauss_seidel(op, op.rhs(_source_values(f)), tol=tol, max_iter=max_iter)


def solve_poisson(
    domain: Domain,
    f: FieldLike,
    g: Optional[np.ndarray] = None,
    bc_kind: str = "dirichlet",
    tol: Optional[float] = None,
    max_iter: Optional[int] = None,
) -> SolutionSample:
    """
    Solve lap u = f with Dirichlet (u = g) or Neumann (du/dn = g) data

    Args:
        domain: Domain (its boundary values are used when g is None)
        f: Source field or per-cell values
        g: Boundary values per interface
        bc_kind: "dirichlet" or "neumann"
        tol: Relative residual tolerance
        max_iter: Sweep limit

    Returns:
        SolutionSample carrying the SolveReport

    Raises:
        SolverConvergenceError: Tolerance not reached within max_iter
    """
    if g is not None:
        domain = domain.with_boundary(domain.boundary.with_values(g))
    source = f if isinstance(f, SourceField) else SourceField(values=_source_values(f), family="custom")

    u, report = solve_field(domain, source, None, bc_kind, tol, max_iter)
    if not report.converged:
        raise SolverConvergenceError(report)

    return SolutionSample(domain=domain, source=source, u=u, bc_kind=bc_kind, report=report)


def discrete_green_column(domain: Domain, j: int, tol: Optional[float] = None) -> np.ndarray:
    """
    Discrete Green's function column for cell j

    Solves lap_h G = e_j / h^2 with homogeneous Dirichlet data.
    """
    if not 0 <= j < domain.num_cells:
        raise ValidationError("j", f"cell index {j} outside [0, {domain.num_cells})")

    op = assemble_operator(domain, "dirichlet", np.zeros(len(domain.boundary)))
    delta = np.zeros(op.size)
    delta[j] = 1.0 / domain.spacing ** 2

    column, report = gauss_seidel(op, -delta, tol=tol)
    if not report.converged:
        raise SolverConvergenceError(report)
    return column


def green_matrix(domain: Domain, tol: Optional[float] = None) -> np.ndarray:
    """All Green columns stacked as G[:, j]"""
    return np.stack([discrete_green_column(domain, j, tol) for j in range(domain.num_cells)], axis=1)


def green_symmetry_defect(green: np.ndarray) -> float:
    """max |G - G^T|, absolute"""
    return float(np.abs(green - green.T).max())


def green_reconstruction(
    domain: Domain,
    f: FieldLike,
    g: Optional[np.ndarray] = None,
    tol: Optional[float] = None,
    green: Optional[np.ndarray] = None,
) -> Tuple[np.ndarray, np.ndarray, float]:
    """
    Rebuild the Dirichlet solution from Green columns

    u = sum_j G[:, j] (f_j - c_j) h^2, where c holds the boundary contributions
    of g to the assembled system.

    Returns:
        (reconstructed u, directly solved u, relative l2 defect)
    """
    f_values = _source_values(f)
    if green is None:
        green = green_matrix(domain, tol)

    op = assemble_operator(domain, "dirichlet", g)
    reconstructed = green @ ((f_values - op.boundary_rhs) * domain.spacing ** 2)
    direct = solve_poisson(domain, f_values, g, "dirichlet", tol).u

    return reconstructed, direct, relative_l2(reconstructed - direct, direct)


def superposition_check(
    domain: Domain,
    f: FieldLike,
    g: Optional[np.ndarray] = None,
    tol: Optional[float] = None,
) -> float:
    """
    Relative l2 defect of solve(f, g) - solve(f, 0) - solve(0, g)

    Returns 0 when the defect vanishes exactly (e.g. f = 0 and g = 0).
    """
    f_values = _source_values(f)
    g_values = domain.boundary.values if g is None else np.asarray(g, dtype=np.float64)
    zero_g = np.zeros_like(g_values)
    zero_f = np.zeros_like(f_values)

    full = solve_poisson(domain, f_values, g_values, "dirichlet", tol).u
    interior = solve_poisson(domain, f_values, zero_g, "dirichlet", tol).u
    boundary = solve_poisson(domain, zero_f, g_values, "dirichlet", tol).u

    return relative_l2(full - interior - boundary, full)


def maximum_principle_defect(u: np.ndarray, g: np.ndarray) -> float:
    """How far u leaves [min g, max g]; 0 when the discrete maximum principle holds"""
    return float(max(0.0, np.max(u) - np.max(g), np.min(g) - np.min(u)))


def manufactured_error(base_n: int, tol: Optional[float] = None) -> float:
    """
    RMS error of the solver against u* = sin(pi x) sin(pi y) on the uncut unit square
    """
    domain = build_domain(base_n)
    x, y = domain.interior_cells[:, 0], domain.interior_cells[:, 1]
    exact = np.sin(np.pi * x) * np.sin(np.pi * y)
    f = -2.0 * np.pi ** 2 * exact

    u = solve_poisson(domain, f, np.zeros(len(domain.boundary)), "dirichlet", tol).u
    return float(np.sqrt(np.mean((u - exact) ** 2)))


def observed_order(base_ns: Sequence[int], errors: Sequence[float]) -> float:
    """Least-squares slope of log(error) against log(h)"""
    if len(base_ns) != len(errors) or len(base_ns) < 2:
        raise ValidationError("base_ns", "need at least two (resolution, error) pairs")
    h = 1.0 / np.asarray(base_ns, dtype=np.float64)
    slope, _ = np.polyfit(np.log(h), np.log(np.asarray(errors, dtype=np.float64)), 1)
    return float(slope)
