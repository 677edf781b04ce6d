"""
Reverse-mode differentiable array

A Tensor wraps a float64 numpy array and remembers the tensors it was
computed from together with a closure that pushes its gradient back to
them. `backward()` walks the recorded graph in reverse topological order.
Every constructed value is checked for NaN/Inf.
"""
from typing import Callable, Optional, Sequence

import numpy as np

from app.exceptions import NonFiniteError, ShapeMismatchError


def _unbroadcast(grad: np.ndarray, shape: tuple) -> np.ndarray:
    """Sum a broadcast gradient back down to `shape`"""
    while grad.ndim > len(shape):
        grad = grad.sum(axis=0)
    for axis, size in enumerate(shape):
        if size == 1 and grad.shape[axis] != 1:
            grad = grad.sum(axis=axis, keepdims=True)
    return grad


class Tensor:
    """float64 array with gradient tracking"""

    def __init__(
        self,
        data,
        parents: Sequence["Tensor"] = (),
        op: str = "",
        requires_grad: bool = False,
    ):
        self.data = np.asarray(data, dtype=np.float64)
        if not np.all(np.isfinite(self.data)):
            raise NonFiniteError(op or "tensor")
        self.grad: Optional[np.ndarray] = None
        self.op = op
        self._parents = tuple(parents)
        self._backward: Optional[Callable[[np.ndarray], None]] = None
        self.requires_grad = requires_grad or any(p.requires_grad for p in self._parents)

    @property
    def shape(self) -> tuple:
        return self.data.shape

    def __len__(self) -> int:
        return len(self.data)

    def __repr__(self) -> str:
        return f"Tensor(shape={self.shape}, op='{self.op}', requires_grad={self.requires_grad})"

    def numpy(self) -> np.ndarray:
        return self.data

    def accumulate(self, grad: np.ndarray):
        if grad.shape != self.data.shape:
            raise ShapeMismatchError(f"gradient {grad.shape} for tensor {self.data.shape}")
        if self.grad is None:
            self.grad = np.zeros_like(self.data)
        self.grad += grad

    def zero_grad(self):
        self.grad = None

    def with_backward(self, fn: Callable[[np.ndarray], None]) -> "Tensor":
        if self.requires_grad:
            self._backward = fn
        return self

    def backward(self, grad: Optional[np.ndarray] = None):
        """Accumulate d(self)/d(leaf) into every tensor that requires grad"""
        if grad is None:
            if self.data.size != 1:
                raise ShapeMismatchError(f"backward() without a seed needs a scalar, got {self.shape}")
            grad = np.ones_like(self.data)

        topo, visited = [], set()
        stack = [(self, False)]
        while stack:
            node, expanded = stack.pop()
            if expanded:
                topo.append(node)
                continue
            if id(node) in visited or not node.requires_grad:
                continue
            visited.add(id(node))
            stack.append((node, True))
            for parent in node._parents:
                stack.append((parent, False))

        self.accumulate(np.asarray(grad, dtype=np.float64))
        for node in reversed(topo):
            if node._backward is not None and node.grad is not None:
                node._backward(node.grad)

    # arithmetic

    def __add__(self, other) -> "Tensor":
        other = as_tensor(other)
        out = Tensor(self.data + other.data, (self, other), "add")

        def backward(g):
            if self.requires_grad:
                self.accumulate(_unbroadcast(g, self.shape))
            if other.requires_grad:
                other.accumulate(_unbroadcast(g, other.shape))
        return out.with_backward(backward)

    __radd__ = __add__

    def __neg__(self) -> "Tensor":
        return self * -1.0

    def __sub__(self, other) -> "Tensor":
        return self + (-as_tensor(other))

    def __rsub__(self, other) -> "Tensor":
        return as_tensor(other) + (-self)

    def __mul__(self, other) -> "Tensor":
        other = as_tensor(other)
        out = Tensor(self.data * other.data, (self, other), "mul")

        def backward(g):
            if self.requires_grad:
                self.accumulate(_unbroadcast(g * other.data, self.shape))
            if other.requires_grad:
                other.accumulate(_unbroadcast(g * self.data, other.shape))
        return out.with_backward(backward)

    __rmul__ = __mul__

    def __matmul__(self, other) -> "Tensor":
        other = as_tensor(other)
        if self.data.ndim != 2 or other.data.ndim != 2 or self.shape[1] != other.shape[0]:
            raise ShapeMismatchError(f"matmul {self.shape} @ {other.shape}")
        out = Tensor(self.data @ other.data, (self, other), "matmul")

        def backward(g):
            if self.requires_grad:
                self.accumulate(g @ other.data.T)
            if other.requires_grad:
                other.accumulate(self.data.T @ g)
        return out.with_backward(backward)

    @property
    def T(self) -> "Tensor":
        out = Tensor(self.data.T, (self,), "transpose")
        return out.with_backward(lambda g: self.accumulate(g.T))


def as_tensor(value) -> Tensor:
    return value if isinstance(value, Tensor) else Tensor(value, op="const")


def parameter(data) -> Tensor:
    """Leaf tensor that receives gradients"""
    return Tensor(data, op="param", requires_grad=True)
