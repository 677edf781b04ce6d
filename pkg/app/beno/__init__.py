"""
BENO Model

Dual-branch boundary-embedded message passing with a self-attention
boundary encoder, plus the w_M and wo_D ablations.
"""
from app.beno.model import (
    BenoModel,
    BenoOutput,
    GraphState,
    beno_forward,
    boundary_transformer,
    branch_forward,
    encode,
    init_parameters,
    mp_step,
)

__all__ = [
    "BenoModel",
    "BenoOutput",
    "GraphState",
    "beno_forward",
    "boundary_transformer",
    "branch_forward",
    "encode",
    "init_parameters",
    "mp_step",
]
