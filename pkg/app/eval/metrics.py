"""
Error Metrics

Relative L2 and MAE per sample, their aggregates over a test set, and a
comparison between two metric reports (e.g. two model variants).
"""
from dataclasses import asdict, dataclass, field
from typing import Any, Dict, List, Sequence

import numpy as np

from app.exceptions import ShapeMismatchError, UndefinedMetricError

MAE_UNIT = 1e-3


def _pair(prediction, truth):
    prediction = np.asarray(prediction, dtype=np.float64)
    truth = np.asarray(truth, dtype=np.float64)
    if prediction.shape != truth.shape:
        raise ShapeMismatchError(f"prediction {prediction.shape} vs ground truth {truth.shape}")
    return prediction, truth


def rel_l2(prediction, truth) -> float:
    """
    ||prediction - truth|| / ||truth||

    Raises:
        UndefinedMetricError: truth is identically zero
    """
    prediction, truth = _pair(prediction, truth)
    norm = np.linalg.norm(truth)
    if norm == 0.0:
        raise UndefinedMetricError("relative L2 error is undefined for an all-zero ground truth")
    return float(np.linalg.norm(prediction - truth) / norm)


def mae(prediction, truth) -> float:
    """Mean absolute difference"""
    prediction, truth = _pair(prediction, truth)
    return float(np.mean(np.abs(prediction - truth)))


@dataclass
class MetricReport:
    """
    Per-sample metrics over a test set

    Attributes:
        names: Sample identifiers
        rel_l2: Relative L2 error per sample
        mae: Mean absolute error per sample (physical units)
    """
    names: List[str]
    rel_l2: List[float]
    mae: List[float]
    label: str = ""

    @classmethod
    def from_predictions(
        cls,
        names: Sequence[str],
        predictions: Sequence[np.ndarray],
        truths: Sequence[np.ndarray],
        label: str = "",
    ) -> "MetricReport":
        return cls(
            names=list(names),
            rel_l2=[rel_l2(p, t) for p, t in zip(predictions, truths)],
            mae=[mae(p, t) for p, t in zip(predictions, truths)],
            label=label,
        )

    def __len__(self) -> int:
        return len(self.names)

    @property
    def rel_l2_mean(self) -> float:
        return float(np.mean(self.rel_l2))

    @property
    def rel_l2_std(self) -> float:
        return float(np.std(self.rel_l2))

    @property
    def mae_mean(self) -> float:
        return float(np.mean(self.mae))

    @property
    def mae_std(self) -> float:
        return float(np.std(self.mae))

    @property
    def mae_e3(self) -> List[float]:
        """MAE in units of 1e-3"""
        return [m / MAE_UNIT for m in self.mae]

    def summary(self) -> Dict[str, Any]:
        return {
            "label": self.label,
            "count": len(self),
            "rel_l2_mean": self.rel_l2_mean,
            "rel_l2_std": self.rel_l2_std,
            "mae_mean": self.mae_mean,
            "mae_std": self.mae_std,
            "mae_e3_mean": self.mae_mean / MAE_UNIT,
            "mae_e3_std": self.mae_std / MAE_UNIT,
        }

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary for JSON serialization"""
        return {**asdict(self), **self.summary()}


@dataclass
class MetricComparison:
    """Difference between a baseline and a candidate evaluated on the same samples"""
    baseline: MetricReport
    candidate: MetricReport
    rel_l2_delta: float
    mae_delta: float
    candidate_wins: int
    improvements: List[str] = field(default_factory=list)
    regressions: List[str] = field(default_factory=list)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "baseline": self.baseline.summary(),
            "candidate": self.candidate.summary(),
            "rel_l2_delta": self.rel_l2_delta,
            "mae_delta": self.mae_delta,
            "candidate_wins": self.candidate_wins,
            "improvements": self.improvements,
            "regressions": self.regressions,
        }


def compare_reports(baseline: MetricReport, candidate: MetricReport) -> MetricComparison:
    """
    Compare two reports sample by sample

    Raises:
        ShapeMismatchError: The reports cover different samples
    """
    if baseline.names != candidate.names:
        raise ShapeMismatchError("metric reports cover different samples")

    rel_delta = candidate.rel_l2_mean - baseline.rel_l2_mean
    mae_delta = candidate.mae_mean - baseline.mae_mean
    wins = int(sum(c < b for c, b in zip(candidate.rel_l2, baseline.rel_l2)))

    improvements, regressions = [], []
    for label, delta in (("mean rel_l2", rel_delta), ("mean mae", mae_delta)):
        if delta < 0:
            improvements.append(f"{label} {delta:+.4e}")
        elif delta > 0:
            regressions.append(f"{label} {delta:+.4e}")

    return MetricComparison(
        baseline=baseline,
        candidate=candidate,
        rel_l2_delta=rel_delta,
        mae_delta=mae_delta,
        candidate_wins=wins,
        improvements=improvements,
        regressions=regressions,
    )
