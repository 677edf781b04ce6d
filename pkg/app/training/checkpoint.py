"""
Checkpoint files

Layout: a plain-text header followed by the parameters as little-endian
float64 values in flat order.

    beno-checkpoint 1
    meta {"model_config": ..., "norm_stats": ..., "info": ...}
    param <name> <shape> <offset>
    ...
    end
    <binary values>
"""
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, Union

import numpy as np

from app.beno.model import init_parameters
from app.core.logging import get_logger
from app.exceptions import BenoError, CheckpointFormatError
from app.models.model_config import ModelConfig
from app.nn.params import ParameterStore
from app.training.normalization import NormStats

logger = get_logger(__name__)

MAGIC = "beno-checkpoint 1"
VALUE_DTYPE = "<f8"


def _format_shape(shape) -> str:
    return "x".join(str(s) for s in shape) or "scalar"


def _parse_shape(text: str):
    return () if text == "scalar" else tuple(int(s) for s in text.split("x"))


def write_parameters(path: Union[str, Path], params: ParameterStore, meta: Dict):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)

    lines = [MAGIC, f"meta {json.dumps(meta, sort_keys=True)}"]
    for name, shape, offset in params.manifest():
        lines.append(f"param {name} {_format_shape(shape)} {offset}")
    lines.append("end")

    with open(path, "wb") as f:
        f.write(("\n".join(lines) + "\n").encode("utf-8"))
        f.write(params.flat_values().astype(VALUE_DTYPE).tobytes())


def read_parameters(path: Union[str, Path]):
    """
    Returns:
        (meta dict, {name: array})

    Raises:
        CheckpointFormatError: Missing file, bad header or truncated values
    """
    path = Path(path)
    if not path.exists():
        raise CheckpointFormatError(f"{path}: checkpoint not found")

    with open(path, "rb") as f:
        if f.readline().decode("utf-8").rstrip("\n") != MAGIC:
            raise CheckpointFormatError(f"{path}: not a checkpoint file")

        meta, manifest = None, []
        while True:
            raw = f.readline()
            if not raw:
                raise CheckpointFormatError(f"{path}: header not terminated")
            line = raw.decode("utf-8").rstrip("\n")
            if line == "end":
                break
            kind, _, rest = line.partition(" ")
            try:
                if kind == "meta":
                    meta = json.loads(rest)
                elif kind == "param":
                    name, shape, offset = rest.split(" ")
                    manifest.append((name, _parse_shape(shape), int(offset)))
                else:
                    raise ValueError(f"unknown header line '{kind}'")
            except ValueError as e:
                raise CheckpointFormatError(f"{path}: {e}") from e

        values = np.frombuffer(f.read(), dtype=VALUE_DTYPE).astype(np.float64)

    state = {}
    for name, shape, offset in manifest:
        size = int(np.prod(shape)) if shape else 1
        if offset + size > len(values):
            raise CheckpointFormatError(f"{path}: values for '{name}' truncated")
        state[name] = values[offset:offset + size].reshape(shape)
    return meta or {}, state


@dataclass
class Checkpoint:
    """Everything needed to evaluate a trained model"""
    model_config: ModelConfig
    params: ParameterStore
    stats: NormStats
    info: Dict = field(default_factory=dict)

    def save(self, path: Union[str, Path]):
        meta = {
            "model_config": self.model_config.model_dump(),
            "norm_stats": self.stats.to_dict(),
            "info": self.info,
        }
        write_parameters(path, self.params, meta)
        logger.info(f"Checkpoint saved: {path}")

    @classmethod
    def load(cls, path: Union[str, Path]) -> "Checkpoint":
        meta, state = read_parameters(path)
        try:
            config = ModelConfig(**meta["model_config"])
            stats = NormStats.from_dict(meta["norm_stats"])
        except (KeyError, TypeError, ValueError) as e:
            raise CheckpointFormatError(f"{path}: incomplete metadata ({e})") from e

        params = init_parameters(config)
        try:
            params.load_state_dict(state)
        except BenoError as e:
            raise CheckpointFormatError(f"{path}: {e}") from e
        return cls(model_config=config, params=params, stats=stats, info=meta.get("info", {}))


def load_checkpoint(path: Union[str, Path]) -> Checkpoint:
    return Checkpoint.load(path)
