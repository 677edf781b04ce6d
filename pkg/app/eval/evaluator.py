"""
Checkpoint Evaluation

Runs a trained checkpoint over a test set, de-standardizes the predictions
and scores them in physical units. The checkpoint and the samples are left
untouched.
"""
import csv
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np

from app.beno.model import beno_forward
from app.core.logging import get_logger, log_stage_timing
from app.eval.metrics import MAE_UNIT, MetricReport
from app.exceptions import ValidationError
from app.graph.builder import build_graph
from app.io.sample_archive import write_prediction
from app.models.domain import Domain
from app.models.sample import SolutionSample
from app.training.checkpoint import Checkpoint
from app.training.normalization import normalize_inputs

logger = get_logger(__name__)

PER_SAMPLE_COLUMNS = ("sample", "rel_l2", "mae", "mae_e3")


@dataclass
class SamplePrediction:
    """Physical-unit prediction for one test sample"""
    name: str
    domain: Domain
    truth: np.ndarray
    prediction: np.ndarray
    branches: List[np.ndarray] = field(default_factory=list)


@dataclass
class EvaluationResult:
    """Metric report plus the predictions it was computed from"""
    report: MetricReport
    predictions: List[SamplePrediction]
    config_echo: Dict[str, Any] = field(default_factory=dict)

    def summary(self) -> Dict[str, Any]:
        return {**self.report.summary(), "config": self.config_echo}

    def write(self, out_path: Union[str, Path], predictions_dir: Optional[Union[str, Path]] = None) -> Path:
        """
        Persist the per-sample CSV at out_path, the JSON summary next to it and
        one prediction CSV per sample

        Returns:
            Path of the JSON summary
        """
        out_path = Path(out_path)
        out_path.parent.mkdir(parents=True, exist_ok=True)

        with open(out_path, "w", newline="", encoding="utf-8") as f:
            writer = csv.writer(f)
            writer.writerow(PER_SAMPLE_COLUMNS)
            for name, rel, err in zip(self.report.names, self.report.rel_l2, self.report.mae):
                writer.writerow([name, repr(rel), repr(err), repr(err / MAE_UNIT)])

        summary_path = out_path.with_suffix(".json")
        with open(summary_path, "w", encoding="utf-8") as f:
            json.dump(self.summary(), f, indent=2, sort_keys=True)

        predictions_dir = Path(predictions_dir) if predictions_dir else out_path.parent / f"{out_path.stem}_predictions"
        for item in self.predictions:
            write_prediction(
                predictions_dir / f"{item.name}_pred.csv",
                item.domain.interior_cells,
                item.prediction,
                item.branches,
            )

        logger.info(f"Evaluation written: {out_path} ({len(self.predictions)} predictions in {predictions_dir})")
        return summary_path


def knn_of(checkpoint: Checkpoint, k: Optional[int] = None) -> Optional[int]:
    """Neighbour count used at training time unless overridden"""
    if k is not None:
        return k
    return checkpoint.info.get("train_config", {}).get("knn_k")


def predict_sample(checkpoint: Checkpoint, sample: SolutionSample, k: Optional[int] = None):
    """
    Physical-unit prediction and branch fields for one sample

    The target mean is carried by the first branch so that the branch fields
    sum to the prediction.

    Returns:
        (prediction (N,), [branch fields (N,)])
    """
    stats = checkpoint.stats
    _, physical = build_graph(sample, knn_of(checkpoint, k))
    output = beno_forward(normalize_inputs(stats, physical), checkpoint.params, checkpoint.model_config)

    prediction = stats.destandardize_target(output.values())
    names = list(output.branches)
    branches = [output.branch_values(names[0]) * stats.target_std + stats.target_mean]
    branches += [output.branch_values(name) * stats.target_std for name in names[1:]]
    return prediction, branches


def evaluate(
    checkpoint: Checkpoint,
    test_set: Sequence[SolutionSample],
    k: Optional[int] = None,
    names: Optional[Sequence[str]] = None,
    label: str = "",
) -> EvaluationResult:
    """
    Score a checkpoint on solved test samples

    Args:
        checkpoint: Trained model with its normalization statistics
        test_set: Solved samples, any resolution
        k: KNN neighbour count (default: the one the checkpoint was trained with)
        names: Sample identifiers (default sample_0000, ...)
        label: Report label

    Returns:
        EvaluationResult

    Raises:
        ValidationError: Empty test set or an unsolved sample
        UndefinedMetricError: A sample with an all-zero solution
    """
    if not test_set:
        raise ValidationError("test_set", "no samples to evaluate")
    names = list(names) if names is not None else [f"sample_{i:04d}" for i in range(len(test_set))]
    if len(names) != len(test_set):
        raise ValidationError("names", f"{len(names)} names for {len(test_set)} samples")

    predictions: List[SamplePrediction] = []
    with log_stage_timing(logger, "evaluation", samples=len(test_set), variant=checkpoint.model_config.variant):
        for name, sample in zip(names, test_set):
            if not sample.solved:
                raise ValidationError("test_set", f"sample '{name}' has no solution")
            prediction, branches = predict_sample(checkpoint, sample, k)
            predictions.append(SamplePrediction(
                name=name,
                domain=sample.domain,
                truth=np.asarray(sample.u, dtype=np.float64),
                prediction=prediction,
                branches=branches,
            ))

    report = MetricReport.from_predictions(
        names,
        [p.prediction for p in predictions],
        [p.truth for p in predictions],
        label=label or checkpoint.model_config.variant,
    )
    logger.info(
        f"{report.label}: rel_l2 {report.rel_l2_mean:.4f} ± {report.rel_l2_std:.4f}, "
        f"mae {report.mae_mean / MAE_UNIT:.3f}e-3 over {len(report)} samples"
    )

    config_echo = {
        "model_config": checkpoint.model_config.model_dump(),
        "knn_k": knn_of(checkpoint, k),
        "checkpoint_info": checkpoint.info,
    }
    return EvaluationResult(report=report, predictions=predictions, config_echo=config_echo)
