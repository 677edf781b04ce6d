"""BENO architecture configuration"""
from typing import Literal
from pydantic import BaseModel, Field, model_validator


Variant = Literal["full", "w_M", "wo_D"]


class ModelConfig(BaseModel):
    """Widths, depths and ablation variant of a BENO model"""

    embed_dim: int = Field(
        default=128,
        description="Embedding width D shared by node, edge and boundary representations",
        ge=2
    )

    mp_steps: int = Field(
        default=5,
        description="Message passing steps T",
        ge=1
    )

    transformer_layers: int = Field(
        default=1,
        description="Self-attention layers L in the boundary encoder",
        ge=1
    )

    attention_heads: int = Field(
        default=2,
        description="Attention heads; per-head width d_k = D / heads",
        ge=1
    )

    mlp_layers: int = Field(
        default=3,
        description="Linear layers M inside the message / node / edge update MLPs",
        ge=1
    )

    variant: Variant = Field(
        default="full",
        description="full: dual-branch BE-MPNN; w_M: vanilla MPNN processor; wo_D: single branch"
    )

    @model_validator(mode="after")
    def _heads_divide_width(self):
        if self.embed_dim % self.attention_heads != 0:
            raise ValueError(
                f"embed_dim ({self.embed_dim}) must be divisible by attention_heads "
                f"({self.attention_heads})"
            )
        return self

    @property
    def head_dim(self) -> int:
        return self.embed_dim // self.attention_heads

    @property
    def uses_boundary_encoder(self) -> bool:
        return self.variant != "w_M"

    @property
    def branches(self) -> tuple:
        return ("main",) if self.variant == "wo_D" else ("branch1", "branch2")

    class Config:
        json_schema_extra = {
            "example": {
                "embed_dim": 128,
                "mp_steps": 5,
                "transformer_layers": 1,
                "attention_heads": 2,
                "mlp_layers": 3,
                "variant": "full"
            }
        }
