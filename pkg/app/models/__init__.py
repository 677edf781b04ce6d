"""
Core Data Models

Array-carrying dataclasses for domains, samples and graphs, and the pydantic
models that configure architectures, training runs and experiments.
Import from this module to ensure consistency.
"""
from app.models.domain import CORNERS, BoundarySet, Domain, SourceField, SourceFamily
from app.models.experiment import ExperimentKind, ExperimentSpec
from app.models.graph import BranchInputs, PdeGraph
from app.models.model_config import ModelConfig, Variant
from app.models.sample import BC_KINDS, BcKind, SolutionSample, SolveReport
from app.models.train_config import TrainConfig

__all__ = [
    "CORNERS",
    "BoundarySet",
    "Domain",
    "SourceField",
    "SourceFamily",
    "ExperimentKind",
    "ExperimentSpec",
    "BranchInputs",
    "PdeGraph",
    "ModelConfig",
    "Variant",
    "BC_KINDS",
    "BcKind",
    "SolutionSample",
    "SolveReport",
    "TrainConfig",
]
