"""
Differentiable Core

Reverse-mode tensors, the operations the model needs, parameter storage
and gradient checking.
"""
from app.nn.tensor import Tensor, as_tensor, parameter
from app.nn.ops import (
    concat,
    columns,
    gather_rows,
    layer_norm,
    linear,
    mean_rows,
    mse,
    repeat_rows,
    segment_sum,
    silu,
    softmax_rows,
    sum_all,
)
from app.nn.params import ParameterStore
from app.nn.gradcheck import grad_check

__all__ = [
    "Tensor",
    "as_tensor",
    "parameter",
    "concat",
    "columns",
    "gather_rows",
    "layer_norm",
    "linear",
    "mean_rows",
    "mse",
    "repeat_rows",
    "segment_sum",
    "silu",
    "softmax_rows",
    "sum_all",
    "ParameterStore",
    "grad_check",
]
