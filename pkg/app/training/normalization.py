"""z-score statistics fitted on the training split"""
from dataclasses import dataclass, replace
from typing import Dict, Sequence

import numpy as np

from app.exceptions import ShapeMismatchError, ValidationError
from app.models.graph import BranchInputs, PdeGraph

STD_FLOOR = 1e-8


def _moments(rows: np.ndarray):
    return rows.mean(axis=0), np.maximum(rows.std(axis=0), STD_FLOOR)


@dataclass(frozen=True)
class NormStats:
    """Per-column mean and std of node, edge, boundary features and the target"""
    node_mean: np.ndarray
    node_std: np.ndarray
    edge_mean: np.ndarray
    edge_std: np.ndarray
    boundary_mean: np.ndarray
    boundary_std: np.ndarray
    target_mean: float
    target_std: float

    def to_dict(self) -> Dict:
        return {
            "node_mean": self.node_mean.tolist(),
            "node_std": self.node_std.tolist(),
            "edge_mean": self.edge_mean.tolist(),
            "edge_std": self.edge_std.tolist(),
            "boundary_mean": self.boundary_mean.tolist(),
            "boundary_std": self.boundary_std.tolist(),
            "target_mean": self.target_mean,
            "target_std": self.target_std,
        }

    @classmethod
    def from_dict(cls, data: Dict) -> "NormStats":
        return cls(
            **{key: np.asarray(data[key], dtype=np.float64) for key in (
                "node_mean", "node_std", "edge_mean", "edge_std", "boundary_mean", "boundary_std"
            )},
            target_mean=float(data["target_mean"]),
            target_std=float(data["target_std"]),
        )

    def standardize_target(self, u: np.ndarray) -> np.ndarray:
        return (np.asarray(u, dtype=np.float64) - self.target_mean) / self.target_std

    def destandardize_target(self, u: np.ndarray) -> np.ndarray:
        return np.asarray(u, dtype=np.float64) * self.target_std + self.target_mean


def zscore_fit(train_graphs: Sequence[PdeGraph]) -> NormStats:
    """
    Fit statistics over all rows of all training graphs

    Raises:
        ValidationError: Fewer than two graphs, or a graph without a finite target
    """
    if len(train_graphs) < 2:
        raise ValidationError("train_samples", f"need at least 2 training samples, got {len(train_graphs)}")
    for graph in train_graphs:
        if graph.target is None or not np.all(np.isfinite(graph.target)):
            raise ValidationError("target", "training samples must be solved (finite u)")

    node_mean, node_std = _moments(np.concatenate([g.node_features for g in train_graphs]))
    edge_mean, edge_std = _moments(np.concatenate([g.edge_features for g in train_graphs]))
    boundary_mean, boundary_std = _moments(np.concatenate([g.boundary_sequence for g in train_graphs]))
    target_mean, target_std = _moments(np.concatenate([g.target for g in train_graphs])[:, None])

    return NormStats(
        node_mean=node_mean,
        node_std=node_std,
        edge_mean=edge_mean,
        edge_std=edge_std,
        boundary_mean=boundary_mean,
        boundary_std=boundary_std,
        target_mean=float(target_mean[0]),
        target_std=float(target_std[0]),
    )


def zscore_apply(stats: NormStats, graph: PdeGraph) -> PdeGraph:
    """Standardize every feature table and the target"""
    if graph.node_features.shape[1] != len(stats.node_mean):
        raise ShapeMismatchError(f"node features {graph.node_features.shape} vs stats {stats.node_mean.shape}")
    target = None if graph.target is None else stats.standardize_target(graph.target)
    return replace(
        graph,
        node_features=(graph.node_features - stats.node_mean) / stats.node_std,
        edge_features=(graph.edge_features - stats.edge_mean) / stats.edge_std,
        boundary_sequence=(graph.boundary_sequence - stats.boundary_mean) / stats.boundary_std,
        target=target,
    )


def normalize_inputs(stats: NormStats, inputs: BranchInputs) -> BranchInputs:
    """Standardize all three branch copies; zeroed columns are zeroed before this"""
    return BranchInputs(
        full=zscore_apply(stats, inputs.full),
        branch1=zscore_apply(stats, inputs.branch1),
        branch2=zscore_apply(stats, inputs.branch2),
    )
