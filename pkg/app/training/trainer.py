"""
Supervised training loop

One optimizer step per sample, samples shuffled every epoch with a seeded
generator, learning rate set per epoch by the warm-restart schedule, and the
parameters of the epoch with the lowest validation MSE kept.
"""
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from app.beno.model import beno_forward, init_parameters
from app.core.logging import get_logger, log_epoch, log_stage_timing
from app.exceptions import NonFiniteError, TrainingDivergedError, ValidationError
from app.graph.builder import build_graph
from app.models.graph import BranchInputs
from app.models.model_config import ModelConfig
from app.models.sample import SolutionSample
from app.models.train_config import TrainConfig
from app.nn import ops
from app.nn.params import ParameterStore
from app.training.checkpoint import Checkpoint
from app.training.normalization import NormStats, normalize_inputs, zscore_fit
from app.training.optim import Adam, lr_schedule

logger = get_logger(__name__)

HISTORY_COLUMNS = ("epoch", "lr", "train_mse", "val_mse")


@dataclass
class EpochRecord:
    epoch: int
    lr: float
    train_mse: float
    val_mse: float


@dataclass
class TrainResult:
    """Best checkpoint plus the per-epoch history"""
    checkpoint: Checkpoint
    history: List[EpochRecord] = field(default_factory=list)
    best_epoch: int = 0
    best_val_mse: float = float("inf")
    train_indices: List[int] = field(default_factory=list)
    val_indices: List[int] = field(default_factory=list)

    def history_array(self) -> np.ndarray:
        return np.array([[r.epoch, r.lr, r.train_mse, r.val_mse] for r in self.history], dtype=np.float64)

    def write_history_csv(self, path: Union[str, Path]):
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        np.savetxt(
            path,
            self.history_array(),
            delimiter=",",
            header=",".join(HISTORY_COLUMNS),
            comments="",
            fmt=["%d", "%.17g", "%.17g", "%.17g"],
        )


def split_indices(n: int, validation_fraction: float, seed: int) -> Tuple[List[int], List[int]]:
    """
    Seeded train/validation split

    Raises:
        ValidationError: Fewer than two samples would remain for training
    """
    n_val = max(1, int(round(n * validation_fraction)))
    if n - n_val < 2:
        raise ValidationError("dataset", f"{n} samples leave fewer than 2 for training")
    order = np.random.default_rng(seed).permutation(n)
    return sorted(int(i) for i in order[n_val:]), sorted(int(i) for i in order[:n_val])


def prepare_inputs(samples: Sequence[SolutionSample], k: int) -> List[BranchInputs]:
    """Physical-unit graphs (and branch copies) for a list of samples"""
    return [build_graph(sample, k)[1] for sample in samples]


def sample_loss(inputs: BranchInputs, params: ParameterStore, config: ModelConfig):
    output = beno_forward(inputs, params, config)
    return ops.mse(output.prediction, inputs.full.target[:, None])


def evaluate_loss(inputs: Sequence[BranchInputs], params: ParameterStore, config: ModelConfig) -> float:
    """Mean per-sample MSE in normalized units"""
    return float(np.mean([sample_loss(x, params, config).data for x in inputs]))


def train(
    config: TrainConfig,
    dataset: Sequence[SolutionSample],
    model_config: ModelConfig,
    progress_every: Optional[int] = None,
) -> TrainResult:
    """
    Train a model on solved samples

    Args:
        config: Optimiser, schedule and split settings
        dataset: Solved samples; the split is drawn from config.seed
        model_config: Architecture and variant
        progress_every: Log an info line every this many epochs (default: ~10 lines per run)

    Returns:
        TrainResult with the best-validation checkpoint

    Raises:
        ValidationError: Unsolved samples or a split with < 2 training samples
        TrainingDivergedError: Non-finite loss
    """
    for i, sample in enumerate(dataset):
        if not sample.solved:
            raise ValidationError("dataset", f"sample {i} has no solution (NaN targets)")

    train_idx, val_idx = split_indices(len(dataset), config.validation_fraction, config.seed)

    with log_stage_timing(logger, "graph_build", samples=len(dataset), knn_k=config.knn_k):
        physical = prepare_inputs(dataset, config.knn_k)

    stats: NormStats = zscore_fit([physical[i].full for i in train_idx])
    train_inputs = [normalize_inputs(stats, physical[i]) for i in train_idx]
    val_inputs = [normalize_inputs(stats, physical[i]) for i in val_idx]

    params = init_parameters(model_config, config.seed)
    optimizer = Adam(params, weight_decay=config.weight_decay)
    rng = np.random.default_rng(config.seed)
    progress_every = progress_every or max(1, config.epochs // 10)

    history: List[EpochRecord] = []
    best_state: Dict[str, np.ndarray] = params.state_dict()
    best_epoch, best_val = 0, float("inf")

    logger.info(
        f"Training {model_config.variant}: {len(train_idx)} train / {len(val_idx)} val samples, "
        f"{params.size} parameters, {config.epochs} epochs"
    )

    for epoch in range(config.epochs):
        lr = lr_schedule(epoch, config.learning_rate, config.restart_period, config.restart_mult, config.eta_min)
        losses = []

        for position in rng.permutation(len(train_inputs)):
            params.zero_grad()
            try:
                loss = sample_loss(train_inputs[position], params, model_config)
            except NonFiniteError as e:
                raise TrainingDivergedError(epoch, train_idx[position], float("nan")) from e
            if not np.isfinite(loss.data):
                raise TrainingDivergedError(epoch, train_idx[position], float(loss.data))
            loss.backward()
            optimizer.step(lr)
            losses.append(float(loss.data))

        val_losses = []
        for position, inputs in enumerate(val_inputs):
            try:
                loss = float(sample_loss(inputs, params, model_config).data)
            except NonFiniteError as e:
                raise TrainingDivergedError(epoch, val_idx[position], float("nan")) from e
            if not np.isfinite(loss):
                raise TrainingDivergedError(epoch, val_idx[position], loss)
            val_losses.append(loss)
        val_mse = float(np.mean(val_losses))

        record = EpochRecord(epoch=epoch + 1, lr=lr, train_mse=float(np.mean(losses)), val_mse=val_mse)
        history.append(record)

        if val_mse < best_val:
            best_val, best_epoch = val_mse, record.epoch
            best_state = params.state_dict()

        log_epoch(logger, record, config.epochs, progress_every)

    params.load_state_dict(best_state)
    checkpoint = Checkpoint(
        model_config=model_config,
        params=params,
        stats=stats,
        info={"best_epoch": best_epoch, "best_val_mse": best_val, "train_config": config.model_dump()},
    )
    logger.info(f"Best validation MSE {best_val:.4e} at epoch {best_epoch}")

    return TrainResult(
        checkpoint=checkpoint,
        history=history,
        best_epoch=best_epoch,
        best_val_mse=best_val,
        train_indices=train_idx,
        val_indices=val_idx,
    )
