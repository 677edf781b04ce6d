"""
Tests for finite-volume assembly, Gauss-Seidel and the solver checks
"""
import numpy as np
import pytest

from app.exceptions import (
    ShapeMismatchError,
    SingularSystemError,
    SolverConvergenceError,
    ValidationError,
)
from app.geometry.domain_gen import build_domain, generate_domain
from app.geometry.fields import sample_boundary_values, sample_source
from app.solver.fvm import assemble_operator
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


def linear_boundary(domain, fn):
    mid = domain.boundary.midpoints
    return fn(mid[:, 0], mid[:, 1])


class TestAssembleOperator:
    """Test the stencil of A = -lap_h"""

    def test_dirichlet_diagonal(self, uncut_domain):
        """Corner cells weigh their two boundary faces twice"""
        op = assemble_operator(uncut_domain, "dirichlet")
        corner = uncut_domain.cell_index[0, 0]
        edge = uncut_domain.cell_index[0, 3]
        center = uncut_domain.cell_index[4, 4]

        assert op.diag_units[corner] == 2 + 2 * 2
        assert op.diag_units[edge] == 3 + 2
        assert op.diag_units[center] == 4

    def test_neumann_diagonal(self, uncut_domain):
        """Neumann faces add nothing to the diagonal"""
        op = assemble_operator(uncut_domain, "neumann")
        np.testing.assert_array_equal(op.diag_units, op.offdiag_units)

    def test_symmetric_positive_definite(self, cut_domain):
        """The Dirichlet matrix is symmetric with positive eigenvalues"""
        matrix = assemble_operator(cut_domain, "dirichlet").to_sparse().toarray()

        np.testing.assert_allclose(matrix, matrix.T)
        assert np.linalg.eigvalsh(matrix).min() > 0

    def test_diagonal_dominance(self, cut_domain):
        """Every row is weakly diagonally dominant"""
        op = assemble_operator(cut_domain, "dirichlet")
        assert np.all(op.diag_units >= op.offdiag_units)

    def test_neumann_constant_nullspace(self, cut_domain):
        """Constants are annihilated by the all-Neumann operator"""
        op = assemble_operator(cut_domain, "neumann")

        assert op.is_singular
        np.testing.assert_allclose(op.apply(np.ones(op.size)), 0.0, atol=1e-9)

    def test_apply_matches_sparse(self, cut_domain, rng):
        """Matrix-free application equals the CSR product"""
        op = assemble_operator(cut_domain, "dirichlet")
        u = rng.normal(size=op.size)

        np.testing.assert_allclose(op.apply(u), op.to_sparse() @ u)

    def test_laplacian_of_linear_field(self, uncut_domain):
        """The interior stencil annihilates linear fields away from the boundary"""
        op = assemble_operator(uncut_domain, "dirichlet")
        u = uncut_domain.interior_cells[:, 0] + 2 * uncut_domain.interior_cells[:, 1]
        interior = op.boundary_faces == 0

        np.testing.assert_allclose(op.laplacian(u)[interior], 0.0, atol=1e-9)

    def test_unknown_bc_kind(self, uncut_domain):
        """Only dirichlet and neumann are accepted"""
        with pytest.raises(ValidationError):
            assemble_operator(uncut_domain, "robin")

    def test_wrong_boundary_length(self, uncut_domain):
        """g must have one value per interface"""
        with pytest.raises(ShapeMismatchError):
            assemble_operator(uncut_domain, "dirichlet", np.zeros(5))

    def test_apply_shape_check(self, uncut_domain):
        """Applying to the wrong shape raises"""
        op = assemble_operator(uncut_domain)
        with pytest.raises(ShapeMismatchError):
            op.apply(np.zeros(3))


class TestGaussSeidel:
    """Test the sweep and its stopping rule"""

    def test_single_sweep_is_sequential(self, cut_domain, rng):
        """One sweep equals the cell-by-cell lexicographic update"""
        op = assemble_operator(cut_domain, "dirichlet")
        b = rng.normal(size=op.size)
        h2 = op.spacing ** 2

        expected = np.zeros(op.size)
        for i in range(op.size):
            nbrs = op.neighbors[i][op.neighbors[i] >= 0]
            expected[i] = (b[i] * h2 + expected[nbrs].sum()) / op.diag_units[i]

        u, report = gauss_seidel(op, b, tol=1e-14, max_iter=1)

        assert report.iterations == 1
        assert not report.converged
        np.testing.assert_allclose(u, expected, rtol=1e-12, atol=1e-14)

    def test_converges_to_direct_solution(self, cut_domain, rng):
        """The converged iterate matches a dense solve"""
        op = assemble_operator(cut_domain, "dirichlet")
        b = rng.normal(size=op.size)

        u, report = gauss_seidel(op, b, tol=1e-12)
        direct = np.linalg.solve(op.to_sparse().toarray(), b)

        assert report.converged
        assert report.final_residual <= 1e-12
        np.testing.assert_allclose(u, direct, atol=1e-8 * np.abs(direct).max())

    def test_energy_decreases(self, cut_domain, rng):
        """The quadratic energy never increases between sweeps"""
        op = assemble_operator(cut_domain, "dirichlet")
        _, report = gauss_seidel(op, rng.normal(size=op.size), tol=1e-10)
        energy = np.asarray(report.energy_history)

        assert len(energy) == report.iterations
        assert np.all(np.diff(energy) <= 1e-12 * np.abs(energy[:-1]).max())

    @pytest.mark.parametrize("index", range(10))
    def test_residual_non_increasing(self, index):
        """Relative residuals never grow from one sweep to the next"""
        domain = generate_domain(16, index % 5, seed=100 + index)
        domain = domain.with_boundary(sample_boundary_values(domain.boundary, seed=200 + index))
        op = assemble_operator(domain, "dirichlet")
        rhs = op.rhs(sample_source(domain, seed=300 + index).values)

        _, report = gauss_seidel(op, rhs, tol=1e-10)
        residuals = np.asarray(report.residual_history)

        assert report.converged
        assert np.all(np.diff(residuals) <= 1e-14)

    def test_over_relaxation_converges_faster(self, uncut_domain, rng):
        """omega = 1.5 needs fewer sweeps than plain Gauss-Seidel here"""
        op = assemble_operator(uncut_domain, "dirichlet")
        b = rng.normal(size=op.size)

        _, plain = gauss_seidel(op, b, tol=1e-10)
        _, sor = gauss_seidel(op, b, tol=1e-10, omega=1.5)

        assert sor.converged
        assert sor.iterations < plain.iterations

    def test_zero_rhs_returns_immediately(self, uncut_domain):
        """b = 0 with a zero start is already solved"""
        op = assemble_operator(uncut_domain)
        u, report = gauss_seidel(op, np.zeros(op.size))

        assert report.iterations == 0
        assert report.converged
        assert not np.any(u)

    def test_invalid_omega(self, uncut_domain):
        """omega outside (0, 2) is rejected"""
        op = assemble_operator(uncut_domain)
        with pytest.raises(ValidationError):
            gauss_seidel(op, np.ones(op.size), omega=2.0)

    def test_invalid_tolerance(self, uncut_domain):
        """Non-positive tolerances are rejected"""
        op = assemble_operator(uncut_domain)
        with pytest.raises(ValidationError):
            gauss_seidel(op, np.ones(op.size), tol=0.0)

    def test_singular_without_pinning(self, uncut_domain):
        """All-Neumann systems require mean pinning"""
        op = assemble_operator(uncut_domain, "neumann")
        with pytest.raises(SingularSystemError):
            gauss_seidel(op, np.ones(op.size), pin_mean=False)


class TestSolvePoisson:
    """Test composed assembly and solve"""

    def test_constant_boundary(self, cut_domain):
        """f = 0 and g = c give u = c"""
        g = np.full(len(cut_domain.boundary), 0.75)
        sample = solve_poisson(cut_domain, np.zeros(cut_domain.num_cells), g, tol=1e-12)

        np.testing.assert_allclose(sample.u, 0.75, rtol=1e-8)

    def test_linear_field_is_exact(self, cut_domain):
        """Harmonic linear fields are reproduced exactly"""
        fn = lambda x, y: 1.0 + 2.0 * x - 3.0 * y
        g = linear_boundary(cut_domain, fn)
        sample = solve_poisson(cut_domain, np.zeros(cut_domain.num_cells), g, tol=1e-12)
        centers = cut_domain.interior_cells

        np.testing.assert_allclose(sample.u, fn(centers[:, 0], centers[:, 1]), atol=1e-9)

    def test_neumann_linear_field(self):
        """Neumann data of u = x recovers x - 1/2 under mean pinning"""
        domain = build_domain(8)
        g = domain.boundary.normals[:, 0]
        sample = solve_poisson(domain, np.zeros(domain.num_cells), g, bc_kind="neumann", tol=1e-12)

        assert sample.bc_kind == "neumann"
        assert sample.u.mean() == pytest.approx(0.0, abs=1e-12)
        np.testing.assert_allclose(sample.u, domain.interior_cells[:, 0] - 0.5, atol=1e-9)

    def test_sample_carries_inputs(self, cut_domain):
        """The returned sample holds f, g and a converged report"""
        domain = cut_domain.with_boundary(sample_boundary_values(cut_domain.boundary, seed=1))
        source = sample_source(domain, seed=2)
        sample = solve_poisson(domain, source)

        assert sample.solved
        assert sample.source is source
        assert sample.report.converged
        np.testing.assert_array_equal(sample.g, domain.boundary.values)

    def test_non_convergence_raises(self, cut_domain):
        """A sweep budget that is too small raises with the report attached"""
        domain = cut_domain.with_boundary(sample_boundary_values(cut_domain.boundary, seed=1))
        with pytest.raises(SolverConvergenceError) as exc_info:
            solve_poisson(domain, sample_source(domain, seed=2), max_iter=2)

        report = exc_info.value.report
        assert report.iterations == 2
        assert not report.converged
        assert exc_info.value.code == "SOLVER_NOT_CONVERGED"


class TestSolverChecks:
    """Test the Green's function and superposition oracles"""

    @pytest.fixture
    def small_domain(self):
        return build_domain(8, {"top_right": 2})

    def test_superposition(self, small_domain):
        """solve(f, g) = solve(f, 0) + solve(0, g)"""
        domain = small_domain.with_boundary(sample_boundary_values(small_domain.boundary, seed=3))
        defect = superposition_check(domain, sample_source(domain, seed=4))
        assert defect < 1e-8

    def test_superposition_all_zero(self, small_domain):
        """The all-zero problem has zero defect"""
        assert superposition_check(small_domain, np.zeros(small_domain.num_cells)) == 0.0

    def test_green_symmetry(self, small_domain):
        """G = G^T on a cut domain"""
        green = green_matrix(small_domain)

        assert green.shape == (small_domain.num_cells, small_domain.num_cells)
        assert green_symmetry_defect(green) < 1e-8

    def test_green_symmetry_absolute_bound(self):
        """On the uncut 8x8 grid |G - G^T| stays within 10 tol"""
        tol = 1e-10
        green = green_matrix(build_domain(8), tol)

        assert green_symmetry_defect(green) <= 10 * tol

    def test_green_symmetry_defect_is_absolute(self):
        """The defect is not scaled by the size of G"""
        green = np.array([[4.0, 1.0], [1.5, 4.0]])
        assert green_symmetry_defect(green) == pytest.approx(0.5)
        assert green_symmetry_defect(10 * green) == pytest.approx(5.0)

    def test_green_column_sign(self, small_domain):
        """G solves lap G = delta, so it is non-positive"""
        column = discrete_green_column(small_domain, 10)
        assert column.max() <= 1e-12
        assert column[10] == column.min()

    def test_green_column_index_check(self, small_domain):
        """Cell indices outside the domain are rejected"""
        with pytest.raises(ValidationError):
            discrete_green_column(small_domain, small_domain.num_cells)

    def test_green_reconstruction(self, small_domain):
        """Green columns rebuild the direct solution"""
        domain = small_domain.with_boundary(sample_boundary_values(small_domain.boundary, seed=5))
        source = sample_source(domain, seed=6)
        recon, direct, defect = green_reconstruction(domain, source.values, domain.boundary.values)

        assert defect < 1e-7
        np.testing.assert_allclose(recon, direct, rtol=1e-6, atol=1e-9)

    def test_maximum_principle_holds(self, small_domain):
        """Harmonic solutions stay inside the boundary range"""
        domain = small_domain.with_boundary(sample_boundary_values(small_domain.boundary, seed=7))
        sample = solve_poisson(domain, np.zeros(domain.num_cells))

        assert maximum_principle_defect(sample.u, sample.g) < 1e-8

    def test_maximum_principle_defect_value(self):
        """The defect measures the overshoot"""
        assert maximum_principle_defect(np.array([0.0, 2.0]), np.array([0.0, 1.0])) == pytest.approx(1.0)
        assert maximum_principle_defect(np.array([0.2, 0.8]), np.array([0.0, 1.0])) == 0.0

    def test_observed_order_exact(self):
        """Errors shrinking by four per halving give order 2"""
        assert observed_order([8, 16], [4e-3, 1e-3]) == pytest.approx(2.0)

    def test_observed_order_needs_two_points(self):
        """At least two resolutions are required"""
        with pytest.raises(ValidationError):
            observed_order([8], [1e-3])

    def test_second_order_accuracy(self):
        """The manufactured solution converges at second order"""
        errors = [manufactured_error(n) for n in (8, 16)]

        assert errors[1] < errors[0]
        assert observed_order([8, 16], errors) > 1.8

    @pytest.mark.slow
    def test_second_order_accuracy_three_levels(self):
        """Order fit over 16, 32 and 64"""
        base_ns = (16, 32, 64)
        errors = [manufactured_error(n) for n in base_ns]
        assert observed_order(base_ns, errors) > 1.8
