"""Signed, feature-dependent adjacency between modality nodes.

Nodes are interleaved per IMU: node ``2p`` carries the posture features of IMU
``p`` and node ``2p + 1`` its motion features.
"""
from __future__ import annotations

import numpy as np

from tsf.exceptions import DegenerateGraphError
from tsf.numerics import functional as F
from tsf.numerics.modules import Linear, Module
from tsf.numerics.tensor import Tensor, as_tensor

INTRA, INTER = "intra", "inter"


class EdgeMlp(Module):
    """C -> C/2 -> 1 perceptron with ReLU in between and tanh on the output."""

    def __init__(self, channels: int, rng: np.random.Generator):
        hidden = max(channels // 2, 1)
        self.fc1 = Linear(channels, hidden, rng)
        self.fc2 = Linear(hidden, 1, rng)

    def zero_(self) -> "EdgeMlp":
        for p in self.parameters():
            p.data[...] = 0.0
        return self

    def forward(self, x: Tensor) -> Tensor:
        return F.tanh(self.fc2(F.relu(self.fc1(x))))


def build_dynamic_adjacency(x: Tensor, mlp: EdgeMlp) -> Tensor:
    """A[..., i, j] = tanh(mlp(x_i * x_j)) for node features x of shape (..., N, C)."""
    x = as_tensor(x)
    n, c = x.shape[-2], x.shape[-1]
    if n < 2:
        raise DegenerateGraphError(f"a modality graph needs at least 2 nodes, got {n}")
    lead = x.shape[:-2]
    products = x.reshape(lead + (n, 1, c)) * x.reshape(lead + (1, n, c))
    weights = mlp(products).reshape(lead + (n, n))
    # symmetric up to matmul rounding; averaging makes it exact
    return (weights + weights.swapaxes(-1, -2)) * 0.5


def edge_kind(i: int, j: int) -> str | None:
    """``intra`` for same modality on different IMUs, ``inter`` for different modalities, else None."""
    if i == j:
        return None
    if i % 2 == j % 2:
        return INTRA
    return INTER


def edge_pairs(num_nodes: int) -> list[tuple[int, int, str]]:
    """Every unordered node pair i < j with its edge kind."""
    pairs = []
    for i in range(num_nodes):
        for j in range(i + 1, num_nodes):
            pairs.append((i, j, edge_kind(i, j)))
    return pairs
