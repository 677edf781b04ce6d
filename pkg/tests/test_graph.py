"""
Tests for Delaunay, KNN and PDE graph construction
"""
import numpy as np
import pytest
from scipy.spatial import Delaunay as ScipyDelaunay

from app.exceptions import DegenerateGeometryError, ParameterError
from app.graph.builder import build_graph, mesh_edges, union_edges
from app.graph.delaunay import delaunay, triangle_edges
from app.graph.knn import knn_edges
from app.models.graph import BOUNDARY_FEATURES, F_COLUMN, G_COLUMN, NODE_FEATURES


def grid_points(n):
    xs, ys = np.meshgrid(np.arange(n), np.arange(n))
    return np.column_stack([xs.ravel(), ys.ravel()]).astype(float)


class TestDelaunay:
    """Test the triangulation"""

    def test_unit_square_tie_break(self):
        """Co-circular square picks the diagonal with the smaller endpoint pair"""
        square = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
        tris = delaunay(square)

        np.testing.assert_array_equal(tris, [[0, 1, 2], [0, 2, 3]])

    def test_grid_triangle_count(self):
        """A 3x3 lattice has 2n - 2 - b = 8 triangles"""
        tris = delaunay(grid_points(3))
        assert len(tris) == 8

    def test_grid_is_deterministic(self):
        """Repeated calls give identical triangles"""
        pts = grid_points(5) * 0.2
        np.testing.assert_array_equal(delaunay(pts), delaunay(pts))

    def test_rows_sorted(self, rng):
        """Each row ascends and rows are lexicographically ordered"""
        tris = delaunay(rng.random((30, 2)))

        assert np.all(np.diff(tris, axis=1) > 0)
        keys = [tuple(t) for t in tris]
        assert keys == sorted(keys)

    def test_empty_circumcircle(self, rng):
        """No point lies strictly inside any circumcircle"""
        pts = rng.random((40, 2))
        for tri in delaunay(pts):
            a, b, c = pts[tri]
            d = 2 * (a[0] * (b[1] - c[1]) + b[0] * (c[1] - a[1]) + c[0] * (a[1] - b[1]))
            ux = ((a @ a) * (b[1] - c[1]) + (b @ b) * (c[1] - a[1]) + (c @ c) * (a[1] - b[1])) / d
            uy = ((a @ a) * (c[0] - b[0]) + (b @ b) * (a[0] - c[0]) + (c @ c) * (b[0] - a[0])) / d
            center = np.array([ux, uy])
            r2 = ((a - center) ** 2).sum()
            inside = ((pts - center) ** 2).sum(axis=1) < r2 * (1 - 1e-9)
            assert not inside.any()

    def test_matches_scipy_in_general_position(self, rng):
        """Random points inside a square frame triangulate the same way as Qhull"""
        frame = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
        pts = np.vstack([frame, 0.05 + 0.9 * rng.random((40, 2))])
        ours = {tuple(t) for t in delaunay(pts)}
        reference = {tuple(sorted(t)) for t in ScipyDelaunay(pts).simplices}

        assert ours == reference

    def test_too_few_points(self):
        """Two points cannot be triangulated"""
        with pytest.raises(DegenerateGeometryError):
            delaunay(np.array([[0.0, 0.0], [1.0, 1.0]]))

    def test_collinear(self):
        """Collinear points are rejected"""
        with pytest.raises(DegenerateGeometryError):
            delaunay(np.array([[0.0, 0.0], [1.0, 1.0], [2.0, 2.0], [3.0, 3.0]]))

    def test_duplicates(self):
        """Duplicate points are rejected"""
        with pytest.raises(DegenerateGeometryError):
            delaunay(np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 1.0], [1.0, 0.0]]))

    def test_triangle_edges(self):
        """Shared edges appear once"""
        edges = triangle_edges(np.array([[0, 1, 2], [0, 2, 3]]))
        np.testing.assert_array_equal(edges, [[0, 1], [0, 2], [0, 3], [1, 2], [2, 3]])


class TestKnnEdges:
    """Test K-nearest-neighbour connectivity"""

    def test_center_of_lattice(self):
        """The lattice center links to its four axis neighbours for K = 4"""
        edges = knn_edges(grid_points(3), 4)
        out = sorted(int(j) for i, j in edges if i == 4)
        assert out == [1, 3, 5, 7]

    def test_tie_break_by_index(self):
        """Equal distances go to the smaller index"""
        pts = np.array([[0.0, 0.0], [1.0, 0.0], [-1.0, 0.0], [0.0, 5.0]])
        edges = {tuple(e) for e in knn_edges(pts, 1)}

        assert (0, 1) in edges
        assert (0, 2) in edges  # reverse of 2 -> 0
        assert (1, 0) in edges

    def test_symmetric_and_sorted(self, rng):
        """Both directions are present and rows are sorted"""
        edges = knn_edges(rng.random((25, 2)), 3)
        as_set = {tuple(e) for e in edges}

        assert all((j, i) in as_set for i, j in as_set)
        assert [tuple(e) for e in edges] == sorted(as_set)

    def test_min_degree_and_no_self_loops(self, rng):
        """Every node has at least K neighbours and no self loops"""
        k = 5
        edges = knn_edges(rng.random((30, 2)), k)

        assert not np.any(edges[:, 0] == edges[:, 1])
        assert np.bincount(edges[:, 0], minlength=30).min() >= k

    @pytest.mark.parametrize("k", [0, 9])
    def test_invalid_k(self, k):
        """K must satisfy 1 <= K < N"""
        with pytest.raises(ParameterError) as exc_info:
            knn_edges(grid_points(3), k)
        assert exc_info.value.code == "PARAMETER_ERROR"


class TestBuildGraph:
    """Test PDE graph assembly"""

    def test_node_features(self, solved_sample):
        """Nodes carry [x, y, f, dx, dy] per interior cell"""
        graph, _ = build_graph(solved_sample, k=4)

        assert graph.node_features.shape == (solved_sample.num_cells, len(NODE_FEATURES))
        np.testing.assert_array_equal(graph.node_features[:, :2], solved_sample.domain.interior_cells)
        np.testing.assert_array_equal(graph.node_features[:, F_COLUMN], solved_sample.f)
        np.testing.assert_array_equal(graph.target, solved_sample.u)

    def test_edges_union_mesh_and_knn(self, solved_sample):
        """The edge set is the union of Delaunay and KNN edges"""
        coords = solved_sample.domain.interior_cells
        graph, _ = build_graph(solved_sample, k=4)
        expected = union_edges(mesh_edges(coords), knn_edges(coords, 4))

        np.testing.assert_array_equal(graph.edges, expected)

    def test_edge_features(self, solved_sample):
        """Edge features are the offset from sender to receiver and its length"""
        graph, _ = build_graph(solved_sample, k=4)
        coords = graph.node_coords
        i, j = graph.edges[:, 0], graph.edges[:, 1]

        np.testing.assert_allclose(graph.edge_features[:, :2], coords[i] - coords[j])
        np.testing.assert_allclose(graph.edge_features[:, 2], np.linalg.norm(coords[i] - coords[j], axis=1))

    def test_boundary_sequence(self, solved_sample):
        """Boundary rows follow the trace with [x, y, g, dc]"""
        graph, _ = build_graph(solved_sample, k=4)
        boundary = solved_sample.domain.boundary

        assert graph.boundary_sequence.shape == (len(boundary), len(BOUNDARY_FEATURES))
        np.testing.assert_array_equal(graph.boundary_sequence[:, :2], boundary.midpoints)
        np.testing.assert_array_equal(graph.boundary_sequence[:, G_COLUMN], boundary.values)

    def test_branch_inputs(self, solved_sample):
        """branch1 drops g, branch2 drops f, full keeps both"""
        graph, branches = build_graph(solved_sample, k=4)

        assert branches.full is graph
        assert np.all(branches.branch1.boundary_sequence[:, G_COLUMN] == 0.0)
        np.testing.assert_array_equal(branches.branch1.node_features, graph.node_features)
        assert np.all(branches.branch2.node_features[:, F_COLUMN] == 0.0)
        np.testing.assert_array_equal(branches.branch2.boundary_sequence, graph.boundary_sequence)
        assert np.any(graph.boundary_sequence[:, G_COLUMN] != 0.0)

    def test_k_too_large(self, tiny_sample):
        """K >= N raises"""
        with pytest.raises(ParameterError):
            build_graph(tiny_sample, k=16)
