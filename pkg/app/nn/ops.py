"""Differentiable operations used by the model"""
from typing import Sequence

import numpy as np
import scipy.sparse as sp
from scipy.special import expit

from app.exceptions import ShapeMismatchError
from app.nn.tensor import Tensor, as_tensor

LAYER_NORM_EPS = 1e-5


def linear(x: Tensor, weight: Tensor, bias: Tensor) -> Tensor:
    """x W + b for x of shape (n, in), W (in, out), b (out,)"""
    x = as_tensor(x)
    if x.data.ndim != 2 or x.shape[1] != weight.shape[0] or bias.shape != (weight.shape[1],):
        raise ShapeMismatchError(f"linear: x {x.shape}, W {weight.shape}, b {bias.shape}")

    out = Tensor(x.data @ weight.data + bias.data, (x, weight, bias), "linear")

    def backward(g):
        if x.requires_grad:
            x.accumulate(g @ weight.data.T)
        if weight.requires_grad:
            weight.accumulate(x.data.T @ g)
        if bias.requires_grad:
            bias.accumulate(g.sum(axis=0))
    return out.with_backward(backward)


def silu(x: Tensor) -> Tensor:
    """x * sigmoid(x)"""
    sig = expit(x.data)
    out = Tensor(x.data * sig, (x,), "silu")
    return out.with_backward(lambda g: x.accumulate(g * sig * (1.0 + x.data * (1.0 - sig))))


def softmax_rows(x: Tensor) -> Tensor:
    """Row-wise softmax with max subtraction"""
    shifted = x.data - x.data.max(axis=1, keepdims=True)
    e = np.exp(shifted)
    s = e / e.sum(axis=1, keepdims=True)
    out = Tensor(s, (x,), "softmax")
    return out.with_backward(lambda g: x.accumulate(s * (g - (g * s).sum(axis=1, keepdims=True))))


def layer_norm(x: Tensor, gain: Tensor, bias: Tensor, eps: float = LAYER_NORM_EPS) -> Tensor:
    """Per-row standardization followed by an elementwise affine map"""
    if x.data.ndim != 2 or x.shape[1] < 2:
        raise ShapeMismatchError(f"layer_norm needs (n, d>=2) input, got {x.shape}")
    if gain.shape != (x.shape[1],) or bias.shape != (x.shape[1],):
        raise ShapeMismatchError(f"layer_norm gain {gain.shape} / bias {bias.shape} for width {x.shape[1]}")

    mean = x.data.mean(axis=1, keepdims=True)
    inv_std = 1.0 / np.sqrt(x.data.var(axis=1, keepdims=True) + eps)
    xhat = (x.data - mean) * inv_std
    out = Tensor(xhat * gain.data + bias.data, (x, gain, bias), "layer_norm")

    def backward(g):
        if gain.requires_grad:
            gain.accumulate((g * xhat).sum(axis=0))
        if bias.requires_grad:
            bias.accumulate(g.sum(axis=0))
        if x.requires_grad:
            gx = g * gain.data
            x.accumulate(inv_std * (
                gx - gx.mean(axis=1, keepdims=True) - xhat * (gx * xhat).mean(axis=1, keepdims=True)
            ))
    return out.with_backward(backward)


def mean_rows(x: Tensor) -> Tensor:
    """Mean over rows, shape (1, d)"""
    n = x.shape[0]
    out = Tensor(x.data.mean(axis=0, keepdims=True), (x,), "mean_rows")
    return out.with_backward(lambda g: x.accumulate(np.broadcast_to(g / n, x.shape).copy()))


def repeat_rows(x: Tensor, n: int) -> Tensor:
    """Tile a (1, d) row n times"""
    if x.shape[0] != 1:
        raise ShapeMismatchError(f"repeat_rows expects a single row, got {x.shape}")
    out = Tensor(np.repeat(x.data, n, axis=0), (x,), "repeat_rows")
    return out.with_backward(lambda g: x.accumulate(g.sum(axis=0, keepdims=True)))


def concat(tensors: Sequence[Tensor], axis: int = 1) -> Tensor:
    tensors = [as_tensor(t) for t in tensors]
    sizes = [t.shape[axis] for t in tensors]
    try:
        data = np.concatenate([t.data for t in tensors], axis=axis)
    except ValueError as e:
        raise ShapeMismatchError(f"concat: {[t.shape for t in tensors]}") from e
    out = Tensor(data, tensors, "concat")
    bounds = np.cumsum([0] + sizes)

    def backward(g):
        for t, lo, hi in zip(tensors, bounds[:-1], bounds[1:]):
            if t.requires_grad:
                t.accumulate(np.take(g, np.arange(lo, hi), axis=axis))
    return out.with_backward(backward)


def columns(x: Tensor, start: int, stop: int) -> Tensor:
    """Column slice x[:, start:stop]"""
    out = Tensor(x.data[:, start:stop], (x,), "columns")

    def backward(g):
        full = np.zeros_like(x.data)
        full[:, start:stop] = g
        x.accumulate(full)
    return out.with_backward(backward)


def incidence(index: np.ndarray, num_segments: int) -> sp.csr_matrix:
    """(num_segments, len(index)) 0/1 matrix with a one at (index[k], k)"""
    index = np.asarray(index, dtype=np.int64)
    return sp.csr_matrix(
        (np.ones(len(index)), (index, np.arange(len(index)))),
        shape=(num_segments, len(index)),
    )


def gather_rows(x: Tensor, index: np.ndarray) -> Tensor:
    """x[index] with gradients scattered back through the incidence matrix"""
    index = np.asarray(index, dtype=np.int64)
    out = Tensor(x.data[index], (x,), "gather_rows")
    return out.with_backward(lambda g: x.accumulate(incidence(index, x.shape[0]) @ g))


def segment_sum(x: Tensor, index: np.ndarray, num_segments: int) -> Tensor:
    """Sum rows of x into num_segments buckets; empty buckets are zero"""
    index = np.asarray(index, dtype=np.int64)
    if len(index) != x.shape[0]:
        raise ShapeMismatchError(f"segment_sum: {len(index)} indices for {x.shape[0]} rows")
    if len(index) == 0:
        return Tensor(np.zeros((num_segments, x.shape[1])), (x,), "segment_sum")
    out = Tensor(incidence(index, num_segments) @ x.data, (x,), "segment_sum")
    return out.with_backward(lambda g: x.accumulate(g[index]))


def sum_all(x: Tensor) -> Tensor:
    out = Tensor(x.data.sum(), (x,), "sum")
    return out.with_backward(lambda g: x.accumulate(np.broadcast_to(g, x.shape).copy()))


def mse(prediction: Tensor, target: np.ndarray) -> Tensor:
    """Mean of squared differences against a constant target"""
    target = np.asarray(target, dtype=np.float64)
    if prediction.shape != target.shape:
        raise ShapeMismatchError(f"mse: prediction {prediction.shape} vs target {target.shape}")
    diff = prediction.data - target
    out = Tensor(np.mean(diff ** 2), (prediction,), "mse")
    return out.with_backward(lambda g: prediction.accumulate(g * 2.0 * diff / diff.size))
