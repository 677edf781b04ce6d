"""
Training Module

z-score normalization, Adam, the warm-restart schedule, checkpoints and the
training loop.
"""
from app.training.checkpoint import Checkpoint, load_checkpoint, read_parameters, write_parameters
from app.training.normalization import NormStats, normalize_inputs, zscore_apply, zscore_fit
from app.training.optim import Adam, AdamState, adam_step, lr_schedule
from app.training.trainer import EpochRecord, TrainResult, split_indices, train

__all__ = [
    "Checkpoint",
    "load_checkpoint",
    "read_parameters",
    "write_parameters",
    "NormStats",
    "normalize_inputs",
    "zscore_apply",
    "zscore_fit",
    "Adam",
    "AdamState",
    "adam_step",
    "lr_schedule",
    "EpochRecord",
    "TrainResult",
    "split_indices",
    "train",
]
