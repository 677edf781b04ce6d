"""Training configuration"""
from pydantic import BaseModel, Field


class TrainConfig(BaseModel):
    """Optimiser, schedule and data-split settings for one training run"""

    learning_rate: float = Field(default=5e-5, description="Base learning rate", gt=0)
    weight_decay: float = Field(default=5e-4, description="Coupled L2 weight decay", ge=0)
    epochs: int = Field(default=500, description="Training epochs", ge=1)
    restart_period: int = Field(
        default=16,
        description="First cycle length T_0 of the warm-restart schedule, in epochs",
        ge=1
    )
    restart_mult: int = Field(default=1, description="Cycle length multiplier T_mult", ge=1)
    eta_min: float = Field(default=0.0, description="Schedule floor", ge=0)
    validation_fraction: float = Field(
        default=1.0 / 9.0,
        description="Share of the dataset held out for per-epoch validation",
        gt=0,
        lt=1
    )
    seed: int = Field(default=0, description="Seed for the split, initialisation and shuffling")
    knn_k: int = Field(default=8, description="Nearest-neighbour count K for graph edges", ge=1)

    class Config:
        json_schema_extra = {
            "example": {
                "learning_rate": 5e-5,
                "weight_decay": 5e-4,
                "epochs": 500,
                "restart_period": 16,
                "seed": 0
            }
        }
