"""
Static PNG rendering of cell fields and training curves

Heatmaps are drawn cell-for-cell: every panel reserves px_per_cell pixels per
cell for the field plus a quarter of that width for its color bar, so image
dimensions scale with base_n. Cells outside the domain are transparent.
"""
from pathlib import Path
from typing import Optional, Sequence, Tuple, Union

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from app.config.settings import settings  # noqa: E402
from app.core.logging import get_logger  # noqa: E402
from app.exceptions import ShapeMismatchError, ValidationError  # noqa: E402
from app.models.domain import Domain  # noqa: E402

logger = get_logger(__name__)

DPI = 100
FIELD_SHARE = 0.8


def field_grid(domain: Domain, values: np.ndarray) -> np.ma.MaskedArray:
    """Scatter per-cell values onto the base_n x base_n grid, masking cut cells"""
    values = np.asarray(values, dtype=np.float64)
    if values.shape != (domain.num_cells,):
        raise ShapeMismatchError(f"{values.shape} values for {domain.num_cells} interior cells")
    grid = np.full((domain.base_n, domain.base_n), np.nan)
    grid[domain.cell_ij[:, 1], domain.cell_ij[:, 0]] = values
    return np.ma.masked_invalid(grid)


def panel_size(base_n: int, px_per_cell: Optional[int] = None) -> Tuple[int, int]:
    """(width, height) in pixels of one heatmap panel including its color bar"""
    px = px_per_cell or settings.PLOT_PX_PER_CELL
    return int(round(base_n * px / FIELD_SHARE)), base_n * px


def _save(fig, out_path: Union[str, Path]) -> Path:
    out_path = Path(out_path)
    try:
        out_path.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(out_path, dpi=DPI, transparent=True)
    except OSError as e:
        raise ValidationError("out_path", f"cannot write {out_path}: {e}") from e
    finally:
        plt.close(fig)
    logger.debug(f"Saved plot: {out_path}")
    return out_path


def _draw_panels(domain: Domain, fields: Sequence[np.ndarray], titles: Sequence[str], px_per_cell: Optional[int]):
    width, height = panel_size(domain.base_n, px_per_cell)
    count = len(fields)
    fig = plt.figure(figsize=(count * width / DPI, height / DPI), dpi=DPI)
    fig.patch.set_alpha(0.0)

    cmap = plt.get_cmap("viridis").copy()
    cmap.set_bad(alpha=0.0)

    for k, (values, title) in enumerate(zip(fields, titles)):
        left = k / count
        share = 1.0 / count
        ax = fig.add_axes([left, 0.0, FIELD_SHARE * share, 1.0])
        ax.set_axis_off()
        image = ax.imshow(
            field_grid(domain, values),
            origin="lower",
            extent=(0.0, 1.0, 0.0, 1.0),
            interpolation="nearest",
            cmap=cmap,
        )
        if title:
            ax.text(0.02, 0.98, title, transform=ax.transAxes, va="top", fontsize=7, color="white")
        cax = fig.add_axes([left + (FIELD_SHARE + 0.04) * share, 0.1, 0.05 * share, 0.8])
        fig.colorbar(image, cax=cax)
    return fig


def plot_field(
    domain: Domain,
    values: np.ndarray,
    out_path: Union[str, Path],
    title: str = "",
    px_per_cell: Optional[int] = None,
) -> Path:
    """
    Render one cell field as a PNG heatmap with a color bar

    Raises:
        ShapeMismatchError: values do not match the interior cell count
        ValidationError: out_path is not writable
    """
    return _save(_draw_panels(domain, [values], [title], px_per_cell), out_path)


def plot_comparison(
    domain: Domain,
    prediction: np.ndarray,
    truth: np.ndarray,
    out_path: Union[str, Path],
    branches: Optional[Sequence[np.ndarray]] = None,
    px_per_cell: Optional[int] = None,
) -> Path:
    """Prediction, ground truth and absolute error side by side, optionally followed by branch fields"""
    prediction = np.asarray(prediction, dtype=np.float64)
    truth = np.asarray(truth, dtype=np.float64)
    fields = [prediction, truth, np.abs(prediction - truth)]
    titles = ["prediction", "ground truth", "|error|"]
    for k, branch in enumerate(branches or [], start=1):
        fields.append(np.asarray(branch, dtype=np.float64))
        titles.append(f"branch {k}")
    return _save(_draw_panels(domain, fields, titles, px_per_cell), out_path)


def plot_history(history: np.ndarray, out_path: Union[str, Path]) -> Path:
    """Train/validation MSE per epoch on a log scale; history columns are epoch, lr, train, val"""
    history = np.asarray(history, dtype=np.float64)
    fig, ax = plt.subplots(figsize=(6, 4), dpi=DPI)
    ax.semilogy(history[:, 0], history[:, 2], label="train MSE")
    ax.semilogy(history[:, 0], history[:, 3], label="validation MSE")
    ax.set_xlabel("epoch")
    ax.set_ylabel("MSE (normalized)")
    ax.legend()
    fig.tight_layout()
    return _save(fig, out_path)
