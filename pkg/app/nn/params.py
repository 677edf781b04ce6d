"""Named parameter storage with a stable flat layout"""
from collections import OrderedDict
from typing import Dict, Iterator, List, Optional, Tuple

import numpy as np

from app.exceptions import ShapeMismatchError, ValidationError
from app.nn.tensor import Tensor, parameter


class ParameterStore:
    """
    Ordered collection of learnable tensors

    Parameters are flattened in insertion order, each row-major, so a flat
    index maps to exactly one (name, offset) pair and back.
    """

    def __init__(self, seed: int = 0):
        self.seed = seed
        self._rng = np.random.default_rng(seed)
        self._params: "OrderedDict[str, Tensor]" = OrderedDict()
        self._offsets: Dict[str, int] = {}
        self._size = 0

    def __contains__(self, name: str) -> bool:
        return name in self._params

    def __getitem__(self, name: str) -> Tensor:
        return self._params[name]

    def __iter__(self) -> Iterator[str]:
        return iter(self._params)

    def __len__(self) -> int:
        return len(self._params)

    def items(self):
        return self._params.items()

    @property
    def size(self) -> int:
        """Total number of scalar parameters"""
        return self._size

    def add(self, name: str, values: np.ndarray) -> Tensor:
        if name in self._params:
            raise ValidationError("name", f"parameter '{name}' already exists")
        tensor = parameter(np.array(values, dtype=np.float64))
        self._params[name] = tensor
        self._offsets[name] = self._size
        self._size += tensor.data.size
        return tensor

    def add_linear(self, name: str, fan_in: int, fan_out: int, bias: bool = True) -> Tuple[Tensor, Optional[Tensor]]:
        """Glorot-uniform weight and (unless bias=False) zero bias"""
        limit = np.sqrt(6.0 / (fan_in + fan_out))
        weight = self.add(f"{name}.weight", self._rng.uniform(-limit, limit, size=(fan_in, fan_out)))
        if not bias:
            return weight, None
        return weight, self.add(f"{name}.bias", np.zeros(fan_out))

    def add_layer_norm(self, name: str, width: int) -> Tuple[Tensor, Tensor]:
        gain = self.add(f"{name}.gain", np.ones(width))
        bias = self.add(f"{name}.bias", np.zeros(width))
        return gain, bias

    def offset(self, name: str) -> int:
        return self._offsets[name]

    def locate(self, flat_index: int) -> Tuple[str, int]:
        """Flat index -> (parameter name, offset within it)"""
        if not 0 <= flat_index < self._size:
            raise ValidationError("flat_index", f"{flat_index} outside [0, {self._size})")
        for name, tensor in self._params.items():
            start = self._offsets[name]
            if flat_index < start + tensor.data.size:
                return name, flat_index - start
        raise AssertionError("unreachable")

    def flat_index(self, name: str, offset: int) -> int:
        if not 0 <= offset < self._params[name].data.size:
            raise ValidationError("offset", f"{offset} outside parameter '{name}'")
        return self._offsets[name] + offset

    def get_value(self, flat_index: int) -> float:
        name, offset = self.locate(flat_index)
        return float(self._params[name].data.reshape(-1)[offset])

    def set_value(self, flat_index: int, value: float):
        name, offset = self.locate(flat_index)
        self._params[name].data.reshape(-1)[offset] = value

    def flat_values(self) -> np.ndarray:
        if not self._params:
            return np.zeros(0)
        return np.concatenate([t.data.reshape(-1) for t in self._params.values()])

    def set_flat_values(self, values: np.ndarray):
        values = np.asarray(values, dtype=np.float64)
        if values.shape != (self._size,):
            raise ShapeMismatchError(f"expected {self._size} flat values, got {values.shape}")
        for name, tensor in self._params.items():
            start = self._offsets[name]
            tensor.data[...] = values[start:start + tensor.data.size].reshape(tensor.shape)

    def flat_grads(self) -> np.ndarray:
        if not self._params:
            return np.zeros(0)
        return np.concatenate([
            (t.grad if t.grad is not None else np.zeros_like(t.data)).reshape(-1)
            for t in self._params.values()
        ])

    def zero_grad(self):
        for tensor in self._params.values():
            tensor.zero_grad()

    def manifest(self) -> List[Tuple[str, Tuple[int, ...], int]]:
        """(name, shape, offset) per parameter in flat order"""
        return [(name, tensor.shape, self._offsets[name]) for name, tensor in self._params.items()]

    def state_dict(self) -> Dict[str, np.ndarray]:
        return {name: tensor.data.copy() for name, tensor in self._params.items()}

    def load_state_dict(self, state: Dict[str, np.ndarray]):
        missing = set(self._params) ^ set(state)
        if missing:
            raise ValidationError("state", f"parameter names differ: {sorted(missing)}")
        for name, tensor in self._params.items():
            values = np.asarray(state[name], dtype=np.float64)
            if values.shape != tensor.shape:
                raise ShapeMismatchError(f"{name}: stored {values.shape}, expected {tensor.shape}")
            tensor.data[...] = values
