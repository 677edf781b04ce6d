"""
Tests for corner-cut domain generation
"""
import numpy as np
import pytest
from matplotlib.path import Path as PolygonPath

from app.exceptions import ValidationError
from app.geometry.domain_gen import build_domain, generate_domain, max_cut_size
from app.models.domain import CORNERS


def shoelace_area(vertices):
    x, y = vertices[:, 0], vertices[:, 1]
    return 0.5 * (np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1)))


class TestBuildDomain:
    """Test explicit domain construction"""

    def test_uncut_square_counts(self):
        """32x32 without cuts has 1024 cells and 128 interfaces"""
        domain = build_domain(32)

        assert domain.num_cells == 1024
        assert len(domain.boundary) == 128
        assert domain.n_corners == 0
        assert domain.spacing == pytest.approx(1 / 32)

    def test_single_cut_cell_count(self):
        """Cutting a 2x2 notch from an 8x8 grid leaves 60 cells"""
        domain = build_domain(8, {"bottom_left": 2})

        assert domain.num_cells == 60
        assert domain.n_corners == 1
        assert not domain.mask[0, 0]
        assert domain.cell_index[0, 0] == -1

    def test_perimeter_is_preserved_by_cuts(self, cut_domain):
        """Rectilinear notches keep the perimeter at 4 * base_n cells"""
        assert len(cut_domain.boundary) == 4 * 16
        assert cut_domain.boundary.perimeter == pytest.approx(4.0)

    def test_polygon_area_matches_cells(self, cut_domain):
        """Counterclockwise polygon area equals the remaining cell area"""
        h = cut_domain.spacing
        cuts = sum(s * s for s in cut_domain.cut_specs.values())
        expected = (16 ** 2 - cuts) * h * h

        assert shoelace_area(cut_domain.vertices) == pytest.approx(expected)

    def test_first_vertex_is_smallest(self, cut_domain):
        """The trace starts at the lexicographically smallest vertex"""
        smallest = min(map(tuple, cut_domain.vertices))
        assert tuple(cut_domain.vertices[0]) == smallest

    def test_cell_order_is_row_major(self, cut_domain):
        """Interior cells are ordered by (row, col)"""
        ij = cut_domain.cell_ij
        keys = ij[:, 1] * 16 + ij[:, 0]
        assert np.all(np.diff(keys) > 0)

    def test_cell_centers_inside_polygon(self, cut_domain):
        """Every interior cell center lies inside the boundary polygon"""
        polygon = PolygonPath(cut_domain.vertices)
        assert polygon.contains_points(cut_domain.interior_cells).all()

    def test_removed_cells_outside_polygon(self, cut_domain):
        """Centers of cut cells lie outside the polygon"""
        polygon = PolygonPath(cut_domain.vertices)
        rows, cols = np.nonzero(~cut_domain.mask)
        centers = (np.stack([cols, rows], axis=1) + 0.5) * cut_domain.spacing

        assert len(centers) == 9 + 1 + 4 + 16
        assert not polygon.contains_points(centers).any()

    def test_boundary_midpoint_normal_consistency(self, cut_domain):
        """Each interface midpoint sits half a cell outward from its inner cell center"""
        boundary = cut_domain.boundary
        h = cut_domain.spacing
        expected = cut_domain.interior_cells[boundary.cells] + 0.5 * h * boundary.normals

        np.testing.assert_allclose(boundary.midpoints, expected, atol=1e-12)

    def test_normals_are_unit_axis_vectors(self, cut_domain):
        """Outward normals are axis aligned unit vectors"""
        normals = cut_domain.boundary.normals
        assert np.all(np.abs(normals).sum(axis=1) == 1.0)

    def test_normals_point_outward(self, cut_domain):
        """Stepping along the normal from a midpoint leaves the domain"""
        boundary = cut_domain.boundary
        polygon = PolygonPath(cut_domain.vertices)
        outside = boundary.midpoints + 0.25 * cut_domain.spacing * boundary.normals
        inside = boundary.midpoints - 0.25 * cut_domain.spacing * boundary.normals

        assert not polygon.contains_points(outside).any()
        assert polygon.contains_points(inside).all()

    def test_arc_length_strictly_increasing(self, cut_domain):
        """Arc length grows by one spacing per interface"""
        arc = cut_domain.boundary.arc_length
        assert np.all(np.diff(arc) > 0)
        np.testing.assert_allclose(np.diff(arc), cut_domain.spacing)
        assert arc[-1] < cut_domain.boundary.perimeter

    def test_boundary_values_start_at_zero(self, uncut_domain):
        """A freshly traced boundary carries g = 0"""
        assert np.all(uncut_domain.boundary.values == 0.0)

    def test_unknown_corner(self):
        """Unknown corner names are rejected"""
        with pytest.raises(ValidationError) as exc_info:
            build_domain(8, {"middle": 1})
        assert exc_info.value.field == "cut_specs"

    def test_cut_too_large(self):
        """Cuts beyond base_n/2 - 1 are rejected"""
        with pytest.raises(ValidationError):
            build_domain(8, {"top_left": 4})

    def test_base_n_too_small(self):
        """base_n below 2 is rejected"""
        with pytest.raises(ValidationError):
            build_domain(1)

    def test_arrays_are_read_only(self, uncut_domain):
        """The mask cannot be modified in place"""
        with pytest.raises(ValueError):
            uncut_domain.mask[0, 0] = False


class TestGenerateDomain:
    """Test random domain generation"""

    @pytest.mark.parametrize("n_corners", [0, 1, 2, 3, 4])
    def test_exact_corner_count(self, n_corners):
        """The generated domain has exactly n_corners cuts"""
        for seed in range(5):
            domain = generate_domain(16, n_corners, seed)
            assert domain.n_corners == n_corners

    def test_cut_sizes_in_range(self):
        """Cut sizes lie in [1, base_n/2 - 1]"""
        for seed in range(20):
            domain = generate_domain(16, 4, seed)
            sizes = list(domain.cut_specs.values())
            assert all(1 <= s <= max_cut_size(16) for s in sizes)

    def test_deterministic(self):
        """Same arguments give the same domain"""
        a = generate_domain(16, 3, 42)
        b = generate_domain(16, 3, 42)

        assert a.cut_specs == b.cut_specs
        np.testing.assert_array_equal(a.mask, b.mask)

    def test_seed_changes_domain(self):
        """Different seeds eventually give different domains"""
        specs = {tuple(generate_domain(16, 2, seed).cut_specs.values()) for seed in range(10)}
        assert len(specs) > 1

    def test_keys_cover_all_corners(self):
        """cut_specs always names all four corners"""
        domain = generate_domain(8, 1, 0)
        assert tuple(domain.cut_specs) == CORNERS

    def test_base_n_too_small(self):
        """Generated domains need base_n >= 8"""
        with pytest.raises(ValidationError) as exc_info:
            generate_domain(6, 1, 0)
        assert exc_info.value.field == "base_n"

    @pytest.mark.parametrize("n_corners", [-1, 5])
    def test_invalid_corner_count(self, n_corners):
        """Corner counts outside 0..4 are rejected"""
        with pytest.raises(ValidationError):
            generate_domain(16, n_corners, 0)

    def test_max_cut_size(self):
        """max_cut_size is base_n/2 - 1"""
        assert max_cut_size(8) == 3
        assert max_cut_size(32) == 15
