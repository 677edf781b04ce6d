"""
Solver Module

Finite-volume Poisson assembly, Gauss-Seidel and solver property checks.
"""
from app.solver.fvm import LinearOperator, assemble_operator
from app.solver.gauss_seidel import gauss_seidel
from app.solver.poisson import (
    discrete_green_column,
    green_matrix,
    green_reconstruction,
    green_symmetry_defect,
    manufactured_error,
    maximum_principle_defect,
    observed_order,
    solve_poisson,
    superposition_check,
)

__all__ = [
    "LinearOperator",
    "assemble_operator",
    "gauss_seidel",
    "discrete_green_column",
    "green_matrix",
    "green_reconstruction",
    "green_symmetry_defect",
    "manufactured_error",
    "maximum_principle_defect",
    "observed_order",
    "solve_poisson",
    "superposition_check",
]
