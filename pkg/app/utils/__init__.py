"""Rendering helpers"""
from app.utils.plotting import field_grid, panel_size, plot_comparison, plot_field, plot_history

__all__ = [
    "field_grid",
    "panel_size",
    "plot_comparison",
    "plot_field",
    "plot_history",
]
