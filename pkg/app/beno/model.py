"""
Boundary-embedded neural operator

Each branch encodes nodes and edges with two-layer MLPs, summarises the
boundary sequence with a self-attention encoder into a single vector B, runs
T message-passing steps whose node update sees B, and decodes every node to
one scalar. The full model adds a source branch (g = 0) and a boundary
branch (f = 0).

Variants:
    full: two branches, boundary-embedded processor
    w_M:  two branches, processor without B and no boundary encoder
    wo_D: one branch on the unmodified inputs
"""
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np

from app.beno.layers import (
    init_mlp,
    init_transformer_layer,
    mlp,
    sinusoidal_position_embedding,
    transformer_layer,
)
from app.core.logging import get_logger
from app.exceptions import ShapeMismatchError
from app.models.graph import BranchInputs, PdeGraph
from app.models.model_config import ModelConfig
from app.nn import ops
from app.nn.params import ParameterStore
from app.nn.tensor import Tensor

logger = get_logger(__name__)

NODE_IN = 5
EDGE_IN = 3
BOUNDARY_IN = 4
POSITION_IN = 2


@dataclass
class GraphState:
    """Node/edge embeddings and the boundary vector at one processor step"""
    nodes: Tensor              # (N, D)
    edges: Tensor              # (E, D)
    boundary: Optional[Tensor]  # (1, D), None when the variant has no boundary encoder
    step: int
    receivers: np.ndarray
    senders: np.ndarray
    relative_positions: np.ndarray  # (E, 2) p_i - p_j


@dataclass
class BenoOutput:
    """Prediction and the per-branch fields it sums"""
    prediction: Tensor                # (N, 1)
    branches: Dict[str, Tensor]

    def values(self) -> np.ndarray:
        return self.prediction.data[:, 0].copy()

    def branch_values(self, name: str) -> np.ndarray:
        return self.branches[name].data[:, 0].copy()


def init_parameters(config: ModelConfig, seed: int = 0) -> ParameterStore:
    """Register every parameter of every branch in a fixed order"""
    params = ParameterStore(seed)
    d = config.embed_dim
    hidden = [d] * config.mlp_layers

    for branch in config.branches:
        init_mlp(params, f"{branch}.node_encoder", [NODE_IN, d, d])
        init_mlp(params, f"{branch}.edge_encoder", [EDGE_IN, d, d])

        if config.uses_boundary_encoder:
            params.add_linear(f"{branch}.boundary.lift", BOUNDARY_IN, d)
            for layer in range(config.transformer_layers):
                init_transformer_layer(params, f"{branch}.boundary.layer{layer}", d)

        node_in = 3 * d if config.uses_boundary_encoder else 2 * d
        for step in range(config.mp_steps):
            prefix = f"{branch}.processor{step}"
            init_mlp(params, f"{prefix}.message", [3 * d + POSITION_IN] + hidden)
            init_mlp(params, f"{prefix}.node", [node_in] + hidden)
            init_mlp(params, f"{prefix}.edge", [2 * d] + hidden)

        init_mlp(params, f"{branch}.decoder", [d, d, 1])

    logger.debug(f"Initialised {config.variant} model: {params.size} parameters (seed={seed})")
    return params


def encode(graph: PdeGraph, params: ParameterStore, branch: str = "branch1") -> GraphState:
    """Initial node and edge embeddings"""
    if graph.node_features.shape[1] != NODE_IN or graph.edge_features.shape[1] != EDGE_IN:
        raise ShapeMismatchError(
            f"node features {graph.node_features.shape} / edge features {graph.edge_features.shape}"
        )
    nodes = mlp(params, f"{branch}.node_encoder", Tensor(graph.node_features), 2)
    edges = mlp(params, f"{branch}.edge_encoder", Tensor(graph.edge_features), 2)

    coords = graph.node_features[:, :POSITION_IN]
    receivers, senders = graph.edges[:, 0], graph.edges[:, 1]
    return GraphState(
        nodes=nodes,
        edges=edges,
        boundary=None,
        step=0,
        receivers=receivers,
        senders=senders,
        relative_positions=coords[receivers] - coords[senders],
    )


def boundary_transformer(
    sequence: np.ndarray,
    params: ParameterStore,
    config: ModelConfig,
    branch: str = "branch1",
    attention_log: Optional[List[np.ndarray]] = None,
) -> Tuple[Tensor, Tensor]:
    """
    Encode the ordered boundary sequence

    Returns:
        (H, B): per-position embeddings (n_b, D) and their mean (1, D)
    """
    sequence = np.asarray(sequence, dtype=np.float64)
    if sequence.ndim != 2 or sequence.shape[1] != BOUNDARY_IN or len(sequence) < 1:
        raise ShapeMismatchError(f"boundary sequence must be (n_b >= 1, 4), got {sequence.shape}")

    lifted = ops.linear(Tensor(sequence), params[f"{branch}.boundary.lift.weight"], params[f"{branch}.boundary.lift.bias"])
    hidden = lifted + sinusoidal_position_embedding(len(sequence), config.embed_dim)
    for layer in range(config.transformer_layers):
        hidden = transformer_layer(
            params, f"{branch}.boundary.layer{layer}", hidden, config.attention_heads, attention_log
        )
    return hidden, ops.mean_rows(hidden)


def mp_step(state: GraphState, params: ParameterStore, config: ModelConfig, branch: str = "branch1") -> GraphState:
    """One boundary-embedded message-passing step"""
    prefix = f"{branch}.processor{state.step}"
    layers = config.mlp_layers
    n = state.nodes.shape[0]

    messages = mlp(params, f"{prefix}.message", ops.concat([
        ops.gather_rows(state.nodes, state.receivers),
        ops.gather_rows(state.nodes, state.senders),
        state.edges,
        Tensor(state.relative_positions),
    ]), layers)
    aggregated = ops.segment_sum(messages, state.receivers, n)

    node_inputs = [state.nodes]
    if state.boundary is not None:
        node_inputs.append(ops.repeat_rows(state.boundary, n))
    node_inputs.append(aggregated)

    nodes = mlp(params, f"{prefix}.node", ops.concat(node_inputs), layers)
    edges = mlp(params, f"{prefix}.edge", ops.concat([state.edges, messages]), layers)

    return GraphState(
        nodes=nodes,
        edges=edges,
        boundary=state.boundary,
        step=state.step + 1,
        receivers=state.receivers,
        senders=state.senders,
        relative_positions=state.relative_positions,
    )


def branch_forward(graph: PdeGraph, params: ParameterStore, config: ModelConfig, branch: str = "branch1") -> Tensor:
    """Encode, embed the boundary, run T steps and decode: (N, 1)"""
    state = encode(graph, params, branch)
    if config.uses_boundary_encoder:
        _, state.boundary = boundary_transformer(graph.boundary_sequence, params, config, branch)
    for _ in range(config.mp_steps):
        state = mp_step(state, params, config, branch)
    return mlp(params, f"{branch}.decoder", state.nodes, 2)


def beno_forward(inputs: BranchInputs, params: ParameterStore, config: ModelConfig) -> BenoOutput:
    """Sum of the branch predictions (a single branch for wo_D)"""
    if config.variant == "wo_D":
        main = branch_forward(inputs.full, params, config, "main")
        return BenoOutput(prediction=main, branches={"main": main})

    first = branch_forward(inputs.branch1, params, config, "branch1")
    second = branch_forward(inputs.branch2, params, config, "branch2")
    return BenoOutput(prediction=first + second, branches={"branch1": first, "branch2": second})


class BenoModel:
    """Configuration plus parameters, with the forward pass bound to them"""

    def __init__(self, config: ModelConfig, seed: int = 0, params: Optional[ParameterStore] = None):
        self.config = config
        self.params = params if params is not None else init_parameters(config, seed)

    @property
    def num_parameters(self) -> int:
        return self.params.size

    def __call__(self, inputs: BranchInputs) -> BenoOutput:
        return beno_forward(inputs, self.params, self.config)

    def predict(self, inputs: BranchInputs) -> np.ndarray:
        return self(inputs).values()
