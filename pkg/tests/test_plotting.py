"""
Tests for PNG rendering
"""
import numpy as np
import pytest
from matplotlib import image as mpimg

from app.exceptions import ShapeMismatchError
from app.utils.plotting import field_grid, panel_size, plot_comparison, plot_field, plot_history


def png_size(path):
    pixels = mpimg.imread(path)
    return pixels.shape[1], pixels.shape[0]


class TestFieldGrid:
    """Test scattering cells onto the grid"""

    def test_cut_cells_masked(self, cut_domain):
        """Removed cells are masked; interior cells carry their values"""
        values = np.arange(cut_domain.num_cells, dtype=float)
        grid = field_grid(cut_domain, values)

        assert grid.shape == (16, 16)
        assert int(grid.mask.sum()) == 16 * 16 - cut_domain.num_cells
        i, j = cut_domain.cell_ij[5]
        assert grid[j, i] == 5.0

    def test_shape_mismatch(self, uncut_domain):
        """Value count must match the interior"""
        with pytest.raises(ShapeMismatchError):
            field_grid(uncut_domain, np.zeros(3))


class TestPlots:
    """Test image files and their sizes"""

    def test_panel_size(self):
        """Pixel size scales with base_n"""
        assert panel_size(8, 16) == (160, 128)
        assert panel_size(16, 16) == (320, 256)

    def test_plot_field(self, solved_sample, tmp_path):
        """A single panel PNG"""
        path = plot_field(solved_sample.domain, solved_sample.u, tmp_path / "u.png", title="u", px_per_cell=16)
        width, height = png_size(path)

        assert path.exists()
        assert abs(width - 160) <= 1
        assert abs(height - 128) <= 1

    def test_plot_comparison(self, solved_sample, tmp_path):
        """Three panels, five with branches"""
        u = solved_sample.u
        three = plot_comparison(solved_sample.domain, u * 0.9, u, tmp_path / "c.png", px_per_cell=16)
        five = plot_comparison(
            solved_sample.domain, u, u, tmp_path / "d.png", branches=[u * 0.5, u * 0.5], px_per_cell=16
        )

        assert abs(png_size(three)[0] - 480) <= 1
        assert abs(png_size(five)[0] - 800) <= 1

    def test_plot_history(self, tmp_path):
        """Training curves render"""
        history = np.array([[1, 1e-3, 1.0, 1.2], [2, 9e-4, 0.5, 0.7], [3, 8e-4, 0.3, 0.4]])
        assert plot_history(history, tmp_path / "sub" / "history.png").exists()
