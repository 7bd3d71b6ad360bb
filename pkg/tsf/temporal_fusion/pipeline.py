"""Three-level temporal fusion with wavelet routing.

Level 1 halves the node features before the local convolution, level 2
halves them again before graph fusion, and level 3 halves the node-pooled
sequence between the two attention blocks.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from tsf.exceptions import ConfigError, DimensionError
from tsf.graph_fusion.block import GraphFusionOutput, ModalityNodeFusion
from tsf.numerics import functional as F
from tsf.numerics.modules import Module
from tsf.numerics.tensor import Tensor, as_tensor
from tsf.temporal_fusion.attention import AttentionBlock, global_fusion
from tsf.temporal_fusion.local import LocalFusion
from tsf.temporal_fusion.selection import (FrequencySelector, SelectionResult, WaveletRoute, select_frequency)
from tsf.temporal_fusion.wavelets import dwt_step, pool_step

MIN_LENGTH = 8


@dataclass
class TemporalOutput:
    pooled: Tensor  # (B, C)
    routes: list[WaveletRoute]
    selections: list[SelectionResult] = field(default_factory=list)
    graph: GraphFusionOutput | None = None
    lengths: tuple[int, ...] = ()


class TemporalPipeline(Module):
    def __init__(self, rng: np.random.Generator, num_nodes: int, in_channels: int = 96, channels: int = 128,
                 local_width: int = 5, graph_layers: int = 2, graph_mode: str = "adaptive",
                 attention_layers: int = 2, heads: int = 4, selection_mode: str = "adaptive",
                 local_dwt: bool = True, global_dwt: bool = True):
        if attention_layers < 2:
            raise ConfigError(f"the pipeline needs at least 2 attention layers, got {attention_layers}")
        self.selection_mode = selection_mode
        self.local_dwt = local_dwt
        self.global_dwt = global_dwt
        self.select_local = FrequencySelector(in_channels, rng, selection_mode)
        self.local = LocalFusion(in_channels, channels, rng, local_width)
        self.select_graph = FrequencySelector(channels, rng, selection_mode)
        self.graph = ModalityNodeFusion(channels, channels, rng, graph_layers, graph_mode, num_nodes)
        self.select_global = FrequencySelector(channels, rng, selection_mode)
        self.attention = [AttentionBlock(channels, heads, rng) for _ in range(attention_layers)]

    def set_temperature(self, tau: float) -> None:
        for selector in (self.select_local, self.select_graph, self.select_global):
            selector.tau = tau

    def _level(self, x: Tensor, selector: FrequencySelector, enabled: bool,
               rng: np.random.Generator | None, selections: list[SelectionResult]) -> tuple[Tensor, Tensor | None]:
        if not enabled:
            return x, None
        if self.selection_mode == "pool":
            return pool_step(x), None
        low, high = dwt_step(x)
        result = select_frequency(low, high, selector, rng)
        selections.append(result)
        return result.primary, result.secondary

    def forward(self, features: Tensor, rng: np.random.Generator | None = None) -> TemporalOutput:
        """features: (B, N, C_in, L) node features."""
        features = as_tensor(features)
        if features.ndim != 4:
            raise DimensionError(f"temporal pipeline expects (B, N, C, L), got {features.shape}")
        if features.shape[-1] < MIN_LENGTH:
            raise DimensionError(f"window length {features.shape[-1]} is below the minimum of {MIN_LENGTH}")
        selections: list[SelectionResult] = []

        primary, secondary = self._level(features, self.select_local, self.local_dwt, rng, selections)
        local = self.local(primary, secondary)

        primary, secondary = self._level(local, self.select_graph, self.local_dwt, rng, selections)
        graph = self.graph(primary)
        fused = graph.fused
        if secondary is not None:
            fused = fused + secondary.mean(axis=1)

        x = global_fusion(fused, None, self.attention[0], position_encoding=True)
        attended_length = x.shape[-1]
        primary, secondary = self._level(x, self.select_global, self.global_dwt, rng, selections)
        x = global_fusion(primary, secondary, self.attention[1])
        for block in self.attention[2:]:
            x = global_fusion(x, None, block)

        if selections:
            bits = np.stack([s.route_bits for s in selections], axis=1)
            routes = [WaveletRoute.from_bits(row) for row in bits]
        else:
            routes = [WaveletRoute(()) for _ in range(features.shape[0])]
        lengths = (local.shape[-1], graph.fused.shape[-1], attended_length, x.shape[-1])
        return TemporalOutput(F.mean_pool(x, axis=-1), routes, selections, graph, lengths)


def temporal_pipeline(features: Tensor, blocks: TemporalPipeline,
                      rng: np.random.Generator | None = None) -> TemporalOutput:
    return blocks(features, rng)
