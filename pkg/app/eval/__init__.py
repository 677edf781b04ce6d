"""
Evaluation Module

Error metrics, checkpoint evaluation and the experiment runner.
"""
from app.eval.metrics import MetricComparison, MetricReport, compare_reports, mae, rel_l2

__all__ = [
    "MetricComparison",
    "MetricReport",
    "compare_reports",
    "mae",
    "rel_l2",
]
