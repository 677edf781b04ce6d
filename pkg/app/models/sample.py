"""Solver report and PDE sample data types"""
from dataclasses import dataclass, field, replace
from typing import Dict, List, Literal, Optional

import numpy as np

from app.models.domain import Domain, SourceField

BcKind = Literal["dirichlet", "neumann"]
BC_KINDS = ("dirichlet", "neumann")


@dataclass
class SolveReport:
    """
    Outcome of an iterative solve

    Attributes:
        iterations: Completed sweeps
        final_residual: Relative residual ||A u - b|| / ||b||
        converged: final_residual <= tolerance
        residual_history: Relative residual after each sweep
        energy_history: Quadratic energy 1/2 u^T A u - b^T u after each sweep
    """
    iterations: int
    final_residual: float
    converged: bool
    tolerance: float
    residual_history: List[float] = field(default_factory=list)
    energy_history: List[float] = field(default_factory=list)

    def to_dict(self) -> Dict:
        return {
            "iterations": self.iterations,
            "final_residual": self.final_residual,
            "converged": self.converged,
            "tolerance": self.tolerance,
        }


@dataclass(frozen=True)
class SolutionSample:
    """
    One PDE instance: domain with boundary values g, source f and solution u

    u holds NaN for unsolved samples.
    """
    domain: Domain
    source: SourceField
    u: np.ndarray
    bc_kind: BcKind = "dirichlet"
    report: Optional[SolveReport] = None

    @property
    def f(self) -> np.ndarray:
        return self.source.values

    @property
    def g(self) -> np.ndarray:
        return self.domain.boundary.values

    @property
    def solved(self) -> bool:
        return bool(np.all(np.isfinite(self.u)))

    @property
    def num_cells(self) -> int:
        return self.domain.num_cells

    def with_solution(self, u: np.ndarray, report: Optional[SolveReport] = None) -> "SolutionSample":
        return replace(self, u=np.asarray(u, dtype=np.float64), report=report)
