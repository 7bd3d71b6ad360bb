from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from tsf.exceptions import ConfigError, DegenerateGraphError, DimensionError
from tsf.graph_fusion.adjacency import EdgeMlp, build_dynamic_adjacency
from tsf.graph_fusion.filters import adaptive_filter_layer
from tsf.numerics import functional as F
from tsf.numerics.modules import Linear, Module, Parameter, he_normal
from tsf.numerics.tensor import Tensor, as_tensor

GRAPH_MODES = ("adaptive", "mlp", "low_pass", "high_pass", "static")


@dataclass
class GraphFusionOutput:
    fused: Tensor  # (B, C_out, L)
    adjacency: Tensor | None  # (B, L, N, N), None in mlp mode


class ModalityNodeFusion(Module):
    """Per-timestamp graph aggregation over modality nodes, channel squeeze and node mean."""

    def __init__(self, channels: int, out_channels: int, rng: np.random.Generator, layers: int = 2,
                 mode: str = "adaptive", num_nodes: int | None = None):
        if mode not in GRAPH_MODES:
            raise ConfigError(f"unknown graph mode {mode!r}, expected one of {GRAPH_MODES}")
        if layers < 1:
            raise ConfigError(f"graph layers must be >= 1, got {layers}")
        self.mode = mode
        self.channels = channels
        self.out_channels = out_channels
        if mode == "mlp":
            if not num_nodes:
                raise ConfigError("mlp graph mode needs the node count")
            self.num_nodes = num_nodes
            self.compress = Linear(num_nodes * channels, out_channels, rng)
            return
        self.edge_mlp = EdgeMlp(channels, rng)
        self.weights = [
            Parameter(he_normal((channels, channels), channels, rng), name=f"graph_layer_{k}")
            for k in range(layers)
        ]
        self.squeeze = Linear((layers + 1) * channels, out_channels, rng)

    def adjacency(self, x_t: Tensor) -> Tensor:
        """Signed adjacency for node features (B, L, N, C) according to the graph mode."""
        if self.mode == "static":
            return Tensor(np.ones(x_t.shape[:-1] + (x_t.shape[-2],)))
        dynamic = build_dynamic_adjacency(x_t, self.edge_mlp)
        if self.mode == "low_pass":
            return F.absolute(dynamic)
        if self.mode == "high_pass":
            return -F.absolute(dynamic)
        return dynamic

    def forward(self, x: Tensor) -> GraphFusionOutput:
        x = as_tensor(x)
        if x.ndim != 4:
            raise DimensionError(f"node features must be (B, N, C, L), got {x.shape}")
        batch, nodes, channels, length = x.shape
        if nodes < 2:
            raise DegenerateGraphError(f"a modality graph needs at least 2 nodes, got {nodes}")
        if channels != self.channels:
            raise DimensionError(f"graph block expects {self.channels} channels, got {channels}")
        x_t = x.transpose(0, 3, 1, 2)  # (B, L, N, C)

        if self.mode == "mlp":
            if nodes != self.num_nodes:
                raise DimensionError(f"mlp graph mode was built for {self.num_nodes} nodes, got {nodes}")
            fused = self.compress(x_t.reshape(batch, length, nodes * channels))
            return GraphFusionOutput(fused.swapaxes(-1, -2), None)

        adjacency = self.adjacency(x_t)
        outputs = [x_t]
        hidden = x_t
        for weight in self.weights:
            hidden = adaptive_filter_layer(hidden, adjacency, weight)
            outputs.append(hidden)
        squeezed = self.squeeze(F.concat(outputs, axis=-1))  # (B, L, N, C_out)
        fused = squeezed.mean(axis=2)
        return GraphFusionOutput(fused.swapaxes(-1, -2), adjacency)


def modality_node_fusion(x: Tensor, block: ModalityNodeFusion) -> GraphFusionOutput:
    return block(x)
