"""Building blocks: MLP stacks and the self-attention encoder layer"""
from typing import List, Optional, Sequence

import numpy as np

from app.nn import ops
from app.nn.params import ParameterStore
from app.nn.tensor import Tensor


def init_mlp(params: ParameterStore, prefix: str, sizes: Sequence[int]):
    """Register linear layers prefix.0 .. prefix.{len(sizes)-2}"""
    for k, (fan_in, fan_out) in enumerate(zip(sizes[:-1], sizes[1:])):
        params.add_linear(f"{prefix}.{k}", fan_in, fan_out)


def mlp(params: ParameterStore, prefix: str, x: Tensor, n_layers: int) -> Tensor:
    """Linear layers with SiLU between them, none after the last"""
    for k in range(n_layers):
        x = ops.linear(x, params[f"{prefix}.{k}.weight"], params[f"{prefix}.{k}.bias"])
        if k < n_layers - 1:
            x = ops.silu(x)
    return x


def sinusoidal_position_embedding(length: int, width: int) -> np.ndarray:
    """Fixed embedding: sin on even columns, cos on odd columns"""
    position = np.arange(length, dtype=np.float64)[:, None]
    rates = np.exp(-np.log(10000.0) * (np.arange(0, width, 2, dtype=np.float64) / width))
    table = np.zeros((length, width))
    table[:, 0::2] = np.sin(position * rates)
    table[:, 1::2] = np.cos(position * rates[: width // 2])
    return table


def init_transformer_layer(params: ParameterStore, prefix: str, width: int):
    for name in ("query", "key", "value", "output"):
        # keys carry no bias: it cancels in the row softmax
        params.add_linear(f"{prefix}.attn.{name}", width, width, bias=name != "key")
    params.add_layer_norm(f"{prefix}.norm1", width)
    init_mlp(params, f"{prefix}.ffn", [width, 2 * width, width])
    params.add_layer_norm(f"{prefix}.norm2", width)


def multi_head_attention(
    params: ParameterStore,
    prefix: str,
    x: Tensor,
    heads: int,
    attention_log: Optional[List[np.ndarray]] = None,
) -> Tensor:
    """Scaled dot-product self-attention over the rows of x"""
    width = x.shape[1]
    head_dim = width // heads

    def project(name):
        return ops.linear(x, params[f"{prefix}.{name}.weight"], params[f"{prefix}.{name}.bias"])

    q, k, v = project("query"), x @ params[f"{prefix}.key.weight"], project("value")
    outputs = []
    for h in range(heads):
        lo, hi = h * head_dim, (h + 1) * head_dim
        scores = ops.columns(q, lo, hi) @ ops.columns(k, lo, hi).T
        weights = ops.softmax_rows(scores * (1.0 / np.sqrt(head_dim)))
        if attention_log is not None:
            attention_log.append(weights.data)
        outputs.append(weights @ ops.columns(v, lo, hi))

    merged = ops.concat(outputs, axis=1)
    return ops.linear(merged, params[f"{prefix}.output.weight"], params[f"{prefix}.output.bias"])


def transformer_layer(
    params: ParameterStore,
    prefix: str,
    x: Tensor,
    heads: int,
    attention_log: Optional[List[np.ndarray]] = None,
) -> Tensor:
    """Attention and feed-forward sublayers, each with residual and layer norm"""
    attended = multi_head_attention(params, f"{prefix}.attn", x, heads, attention_log)
    x = ops.layer_norm(x + attended, params[f"{prefix}.norm1.gain"], params[f"{prefix}.norm1.bias"])
    fed = mlp(params, f"{prefix}.ffn", x, 2)
    return ops.layer_norm(x + fed, params[f"{prefix}.norm2.gain"], params[f"{prefix}.norm2.bias"])
