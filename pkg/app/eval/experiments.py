"""
Experiment Runner

Generation -> training -> evaluation studies driven by an ExperimentSpec:
cross-shape generalization, zero-boundary testing, resolution transfer and
variant comparison. Every stage writes its artifacts under the run
directory as soon as it finishes.

Layout of <output_dir>/<name>/:
    spec.yaml
    data/<set>/...               generated datasets
    <variant>/checkpoint.beno    one training run per variant
    <variant>/eval_<set>.csv     per-sample metrics (+ .json summary, predictions)
    grid.csv                     variant x test-set summary
    report.json
"""
import csv
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import yaml
from pydantic import ValidationError as PydanticValidationError

from app.config.config_manager import config_manager
from app.config.settings import settings
from app.core.logging import get_logger, log_stage_timing
from app.core.pipeline import WorkbenchPipeline
from app.eval.metrics import MAE_UNIT, MetricComparison, MetricReport, compare_reports
from app.exceptions import ConfigurationError, ExperimentError
from app.models.experiment import ExperimentSpec
from app.models.sample import SolutionSample

logger = get_logger(__name__)

TRAIN_STREAM = 0
TEST_STREAM = 1
GRID_COLUMNS = ("variant", "test_set", "count", "rel_l2_mean", "rel_l2_std", "mae_e3_mean", "mae_e3_std")


@dataclass
class ExperimentReport:
    """
    Metric grid of one experiment

    Attributes:
        spec: The executed specification
        grid: variant -> test set -> MetricReport
        comparisons: "<candidate>:<test set>" -> comparison against the first variant
        run_dir: Directory holding every artifact
    """
    spec: ExperimentSpec
    grid: Dict[str, Dict[str, MetricReport]] = field(default_factory=dict)
    comparisons: Dict[str, MetricComparison] = field(default_factory=dict)
    run_dir: Optional[Path] = None

    @property
    def variants(self) -> List[str]:
        return list(self.grid)

    @property
    def test_sets(self) -> List[str]:
        return list(next(iter(self.grid.values()), {}))

    @property
    def shape(self):
        return len(self.variants), len(self.test_sets)

    def rows(self) -> List[Dict[str, Any]]:
        rows = []
        for variant, reports in self.grid.items():
            for test_set, report in reports.items():
                rows.append({
                    "variant": variant,
                    "test_set": test_set,
                    "count": len(report),
                    "rel_l2_mean": report.rel_l2_mean,
                    "rel_l2_std": report.rel_l2_std,
                    "mae_e3_mean": report.mae_mean / MAE_UNIT,
                    "mae_e3_std": report.mae_std / MAE_UNIT,
                })
        return rows

    def to_dict(self) -> Dict[str, Any]:
        return {
            "spec": self.spec.model_dump(mode="json"),
            "grid": self.rows(),
            "comparisons": {key: value.to_dict() for key, value in self.comparisons.items()},
        }

    def write(self, run_dir: Union[str, Path]):
        run_dir = Path(run_dir)
        run_dir.mkdir(parents=True, exist_ok=True)
        with open(run_dir / "grid.csv", "w", newline="", encoding="utf-8") as f:
            writer = csv.DictWriter(f, fieldnames=GRID_COLUMNS)
            writer.writeheader()
            writer.writerows(self.rows())
        with open(run_dir / "report.json", "w", encoding="utf-8") as f:
            json.dump(self.to_dict(), f, indent=2)


def resolve_spec_path(path: Union[str, Path]) -> Path:
    """A path as given, else a shipped spec under BENO_EXPERIMENTS_DIR (".yaml" optional)"""
    path = Path(path)
    if path.exists() or path.is_absolute():
        return path
    shipped = settings.EXPERIMENTS_DIR / (path if path.suffix else path.with_suffix(".yaml"))
    return shipped if shipped.exists() else path


def load_experiment_spec(path: Union[str, Path]) -> ExperimentSpec:
    """
    Read and validate a YAML experiment specification

    Raises:
        ConfigurationError: Missing file, invalid YAML or invalid fields
    """
    path = resolve_spec_path(path)
    if not path.exists():
        raise ConfigurationError("file not found", config_file=str(path))
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = yaml.safe_load(f)
    except yaml.YAMLError as e:
        raise ConfigurationError(f"invalid YAML: {e}", config_file=str(path)) from e
    if not isinstance(data, dict):
        raise ConfigurationError("experiment spec must be a mapping", config_file=str(path))

    try:
        return ExperimentSpec(**data)
    except PydanticValidationError as e:
        message = "; ".join(f"{'.'.join(map(str, err['loc']))}: {err['msg']}" for err in e.errors())
        raise ConfigurationError(message, config_file=str(path)) from e


def _solved(samples: List[SolutionSample], set_name: str) -> List[SolutionSample]:
    kept = [s for s in samples if s.solved]
    if len(kept) < len(samples):
        logger.warning(f"{set_name}: dropping {len(samples) - len(kept)} unsolved samples")
    return kept


def _test_sets(spec: ExperimentSpec) -> List[tuple]:
    """(set name, base_n, corners) per test set"""
    sets = [(f"c{c}_n{spec.test_base_n}", spec.test_base_n, c) for c in spec.test_corners]
    if spec.kind == "resolution_transfer":
        sets = [(f"c{c}_n{spec.train_base_n}", spec.train_base_n, c) for c in spec.train_corners] + sets
    return sets


def run_experiment(spec: ExperimentSpec, pipeline: Optional[WorkbenchPipeline] = None) -> ExperimentReport:
    """
    Run one experiment end to end

    The training data of all train families is concatenated and every variant
    is trained on it with the same seed, then scored on the same test sets.

    Returns:
        ExperimentReport, also written to <output_dir>/<name>/

    Raises:
        ConfigurationError: Unknown preset or invalid overrides
        ExperimentError: A dataset left without solved samples
    """
    pipeline = pipeline or WorkbenchPipeline()
    run_dir = spec.run_dir
    run_dir.mkdir(parents=True, exist_ok=True)
    with open(run_dir / "spec.yaml", "w", encoding="utf-8") as f:
        yaml.safe_dump(spec.model_dump(mode="json"), f, sort_keys=False)

    overrides = {"seed": spec.seed, **spec.overrides}
    model_config, train_config = config_manager.build_configs(spec.preset, **overrides)

    logger.info(
        f"Experiment '{spec.name}' ({spec.kind}): train corners {spec.train_corners} at {spec.train_base_n}, "
        f"test corners {spec.test_corners} at {spec.test_base_n}, variants {spec.variants}"
    )

    with log_stage_timing(logger, "experiment_data", pipeline.run_id, experiment=spec.name):
        train_samples: List[SolutionSample] = []
        for corners in spec.train_corners:
            set_name = f"train_c{corners}"
            generated = pipeline.generate(
                spec.train_base_n, corners, spec.train_samples, spec.seed,
                out=run_dir / "data" / set_name, bc_kind=spec.bc_kind,
                set_name=set_name, stream=TRAIN_STREAM,
            )
            train_samples += _solved(generated, set_name)

        test_data: Dict[str, tuple] = {}
        for set_name, base_n, corners in _test_sets(spec):
            generated = pipeline.generate(
                base_n, corners, spec.test_samples, spec.seed,
                out=run_dir / "data" / f"test_{set_name}", homogeneous=spec.homogeneous_test,
                bc_kind=spec.bc_kind, set_name=f"test_{set_name}", stream=TEST_STREAM,
            )
            names = [f"test_{set_name}_{i:04d}" for i, s in enumerate(generated) if s.solved]
            solved = _solved(generated, set_name)
            if not solved:
                raise ExperimentError(f"test set '{set_name}' has no solved samples")
            test_data[set_name] = (solved, names)

    if len(train_samples) < 3:
        raise ExperimentError(f"only {len(train_samples)} solved training samples")

    report = ExperimentReport(spec=spec, run_dir=run_dir)
    for variant in dict.fromkeys(spec.variants):
        variant_config = model_config.model_copy(update={"variant": variant})
        result = pipeline.train(train_samples, variant_config, train_config, out_dir=run_dir / variant)

        report.grid[variant] = {}
        for set_name, (samples, names) in test_data.items():
            evaluation = pipeline.evaluate(
                result.checkpoint, samples,
                out=run_dir / variant / f"eval_{set_name}.csv",
                names=names, label=f"{variant}/{set_name}",
            )
            report.grid[variant][set_name] = evaluation.report
        report.write(run_dir)

    baseline = report.variants[0]
    for candidate in report.variants[1:]:
        for set_name in report.test_sets:
            report.comparisons[f"{candidate}:{set_name}"] = compare_reports(
                report.grid[baseline][set_name], report.grid[candidate][set_name]
            )

    report.write(run_dir)
    for row in report.rows():
        logger.info(
            f"{row['variant']:>5} {row['test_set']:>10}: rel_l2 {row['rel_l2_mean']:.4f} ± {row['rel_l2_std']:.4f}"
        )
    return report
