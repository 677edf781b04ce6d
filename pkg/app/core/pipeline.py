"""
Workbench Pipeline - Central Orchestration

This module ties the stages together: dataset generation (domain, source,
boundary values, solve), training and evaluation, with the artifacts each
stage persists. It decouples the CLI and the experiment runner from the
individual packages.

Usage:
    pipeline = WorkbenchPipeline(run_id="run_abc123")
    samples = pipeline.generate(base_n=16, n_corners=4, count=20, seed=0, out="data/c4")
    result = pipeline.train(samples, model_config, train_config, out_dir="runs/full")
"""
from concurrent.futures import ProcessPoolExecutor
from functools import partial
from pathlib import Path
from typing import List, Optional, Sequence, Union

import numpy as np

from app.config.settings import settings
from app.core.logging import generate_run_id, get_logger, log_stage_timing, set_run_context
from app.eval.evaluator import EvaluationResult, evaluate
from app.exceptions import SolverConvergenceError, ValidationError
from app.geometry.domain_gen import generate_domain
from app.geometry.fields import sample_boundary_values, sample_source
from app.io.sample_archive import write_dataset
from app.models.model_config import ModelConfig
from app.models.sample import BC_KINDS, SolutionSample
from app.models.train_config import TrainConfig
from app.solver.poisson import solve_poisson
from app.training.checkpoint import Checkpoint
from app.training.trainer import TrainResult, train
from app.utils.plotting import plot_history

logger = get_logger(__name__)

CHECKPOINT_NAME = "checkpoint.beno"
HISTORY_CSV = "history.csv"
HISTORY_PNG = "history.png"


def sample_seeds(seed: int, base_n: int, n_corners: int, index: int, stream: int = 0) -> List[int]:
    """Independent seeds for the domain, the source and the boundary values of one sample

    stream separates datasets drawn from the same seed (e.g. 0 for training, 1 for testing).
    """
    if seed < 0:
        raise ValidationError("seed", f"must be >= 0, got {seed}")
    children = np.random.SeedSequence([seed, stream, base_n, n_corners, index]).spawn(3)
    return [int(child.generate_state(1)[0]) for child in children]


def generate_sample(
    index: int,
    base_n: int,
    n_corners: int,
    seed: int,
    homogeneous: bool = False,
    bc_kind: str = "dirichlet",
    tol: Optional[float] = None,
    stream: int = 0,
) -> SolutionSample:
    """
    Generate and solve one sample

    A solve that misses its tolerance yields a sample whose u is NaN and whose
    report is marked unconverged; the caller decides whether that is fatal.
    """
    domain_seed, source_seed, boundary_seed = sample_seeds(seed, base_n, n_corners, index, stream)
    domain = generate_domain(base_n, n_corners, domain_seed)
    domain = domain.with_boundary(sample_boundary_values(domain.boundary, boundary_seed, homogeneous))
    source = sample_source(domain, source_seed)

    try:
        return solve_poisson(domain, source, bc_kind=bc_kind, tol=tol)
    except SolverConvergenceError as e:
        logger.warning(f"Sample {index}: {e}; stored unsolved")
        return SolutionSample(
            domain=domain,
            source=source,
            u=np.full(domain.num_cells, np.nan),
            bc_kind=bc_kind,
            report=e.report,
        )


def generate_dataset(
    base_n: int,
    n_corners: int,
    count: int,
    seed: int,
    homogeneous: bool = False,
    bc_kind: str = "dirichlet",
    workers: int = 1,
    tol: Optional[float] = None,
    stream: int = 0,
) -> List[SolutionSample]:
    """
    Generate count samples; the result is independent of the worker count

    Raises:
        ValidationError: count < 1, workers < 1 or unknown bc_kind
    """
    if count < 1:
        raise ValidationError("count", f"must be >= 1, got {count}")
    if workers < 1:
        raise ValidationError("workers", f"must be >= 1, got {workers}")
    if bc_kind not in BC_KINDS:
        raise ValidationError("bc_kind", f"must be one of {BC_KINDS}, got '{bc_kind}'")

    make = partial(
        generate_sample,
        base_n=base_n,
        n_corners=n_corners,
        seed=seed,
        homogeneous=homogeneous,
        bc_kind=bc_kind,
        tol=tol,
        stream=stream,
    )
    if workers == 1:
        return [make(index) for index in range(count)]

    with ProcessPoolExecutor(max_workers=workers) as executor:
        return list(executor.map(make, range(count)))


def default_set_name(n_corners: int) -> str:
    return f"c{n_corners}"


class WorkbenchPipeline:
    """
    Central Pipeline for dataset generation, training and evaluation

    Every stage sets the logging run context and is timed; every stage that is
    given an output location persists its artifacts before returning, so a
    failure later on leaves the earlier results on disk.
    """

    def __init__(self, run_id: Optional[str] = None, workers: int = 1):
        """
        Initialize pipeline

        Args:
            run_id: Run ID for tracing (auto-generated if not provided)
            workers: Processes used for dataset generation
        """
        self.run_id = run_id or generate_run_id()
        self.workers = workers
        self.logger = get_logger(__name__)

    def generate(
        self,
        base_n: int,
        n_corners: int,
        count: int,
        seed: int,
        out: Optional[Union[str, Path]] = None,
        homogeneous: bool = False,
        bc_kind: str = "dirichlet",
        set_name: Optional[str] = None,
        stream: int = 0,
    ) -> List[SolutionSample]:
        """
        Generate (and optionally write) a dataset of one corner-count family

        Returns:
            Samples in index order
        """
        set_name = set_name or default_set_name(n_corners)
        set_run_context(self.run_id, stage="generate", dataset=set_name)

        with log_stage_timing(self.logger, "dataset_generation", self.run_id, count=count, base_n=base_n):
            samples = generate_dataset(
                base_n, n_corners, count, seed,
                homogeneous=homogeneous, bc_kind=bc_kind, workers=self.workers, stream=stream,
            )

        unsolved = sum(not s.solved for s in samples)
        if unsolved:
            self.logger.warning(f"{unsolved}/{count} samples did not converge")

        if out is not None:
            write_dataset(samples, out, set_name, meta={
                "base_n": base_n,
                "corners": n_corners,
                "seed": seed,
                "homogeneous": homogeneous,
                "stream": stream,
                "version": settings.APP_VERSION,
            })
        return samples

    def train(
        self,
        samples: Sequence[SolutionSample],
        model_config: ModelConfig,
        train_config: TrainConfig,
        out_dir: Optional[Union[str, Path]] = None,
    ) -> TrainResult:
        """
        Train on solved samples and persist checkpoint.beno, history.csv and history.png

        Raises:
            ValidationError: Unsolved samples or too few samples
            TrainingDivergedError: Non-finite loss
        """
        set_run_context(self.run_id, stage="train", variant=model_config.variant)

        with log_stage_timing(self.logger, "training", self.run_id, variant=model_config.variant):
            result = train(train_config, samples, model_config)

        if out_dir is not None:
            out_dir = Path(out_dir)
            result.checkpoint.save(out_dir / CHECKPOINT_NAME)
            result.write_history_csv(out_dir / HISTORY_CSV)
            with log_stage_timing(self.logger, "plotting", self.run_id):
                plot_history(result.history_array(), out_dir / HISTORY_PNG)
        return result

    def evaluate(
        self,
        checkpoint: Checkpoint,
        samples: Sequence[SolutionSample],
        out: Optional[Union[str, Path]] = None,
        names: Optional[Sequence[str]] = None,
        label: str = "",
    ) -> EvaluationResult:
        """Score a checkpoint and optionally persist the per-sample CSV, JSON summary and predictions"""
        set_run_context(self.run_id, stage="evaluate", variant=checkpoint.model_config.variant)

        result = evaluate(checkpoint, samples, names=names, label=label)
        if out is not None:
            result.write(out)
        return result
