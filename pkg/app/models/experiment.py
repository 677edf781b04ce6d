"""Experiment specification"""
from pathlib import Path
from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, Field, field_validator, model_validator

from app.config.settings import settings
from app.models.model_config import Variant
from app.models.sample import BcKind


ExperimentKind = Literal["cross_shape", "zero_boundary", "resolution_transfer", "variant_comparison"]


class ExperimentSpec(BaseModel):
    """One generation -> training -> evaluation study"""

    name: str = Field(..., description="Experiment name; also the output sub-directory", min_length=1)

    kind: ExperimentKind = Field(
        ...,
        description="cross_shape / zero_boundary / resolution_transfer / variant_comparison"
    )

    preset: str = Field(default="desk", description="Hyper-parameter preset the runs start from")

    overrides: Dict[str, Any] = Field(
        default_factory=dict,
        description="Model / train field overrides applied on top of the preset"
    )

    train_corners: List[int] = Field(
        default_factory=lambda: [4],
        description="Corner counts of the training families; several families are concatenated",
        min_length=1
    )

    test_corners: List[int] = Field(
        default_factory=lambda: [0, 1, 2, 3, 4],
        description="Corner counts of the test families",
        min_length=1
    )

    train_base_n: int = Field(default=16, description="Training resolution", ge=8)

    test_base_n: Optional[int] = Field(
        None,
        description="Test resolution; defaults to twice train_base_n for resolution_transfer, else train_base_n",
        ge=8
    )

    train_samples: int = Field(default=20, description="Training samples per training family", ge=3)
    test_samples: int = Field(default=10, description="Test samples per test family", ge=1)

    variants: List[Variant] = Field(
        default_factory=lambda: ["full"],
        description="Model variants trained on the same data",
        min_length=1
    )

    homogeneous_test: bool = Field(default=False, description="Test samples with g = 0")
    bc_kind: BcKind = Field(default="dirichlet", description="Boundary condition of every dataset")
    seed: int = Field(default=0, description="Base seed for data and training")
    output_dir: Path = Field(
        default_factory=lambda: settings.OUTPUT_DIR,
        description="Parent directory of the experiment output (default BENO_OUTPUT_DIR)"
    )

    @field_validator("train_corners", "test_corners")
    @classmethod
    def _corner_counts(cls, value: List[int]) -> List[int]:
        for count in value:
            if not 0 <= count <= 4:
                raise ValueError(f"corner counts must be in 0..4, got {count}")
        return value

    @model_validator(mode="after")
    def _apply_kind(self):
        if self.kind == "zero_boundary":
            self.homogeneous_test = True
        if self.test_base_n is None:
            factor = 2 if self.kind == "resolution_transfer" else 1
            self.test_base_n = factor * self.train_base_n
        if self.kind == "variant_comparison" and len(set(self.variants)) < 2:
            raise ValueError("variant_comparison needs at least two distinct variants")
        return self

    @property
    def run_dir(self) -> Path:
        return self.output_dir / self.name

    class Config:
        json_schema_extra = {
            "example": {
                "name": "cross_shape_desk",
                "kind": "cross_shape",
                "preset": "desk",
                "train_corners": [4],
                "test_corners": [0, 1, 2, 3, 4],
                "train_base_n": 16,
                "train_samples": 20,
                "test_samples": 10,
                "variants": ["full"],
                "seed": 0
            }
        }
