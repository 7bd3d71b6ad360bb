from __future__ import annotations

import numpy as np

from tsf.numerics import functional as F
from tsf.numerics.tensor import Tensor, as_tensor

DEGREE_EPS = 1e-8


def propagation_matrix(adjacency: Tensor) -> Tensor:
    """D^-1/2 A D^-1/2 with the degree taken from |A| plus a small floor."""
    adjacency = as_tensor(adjacency)
    degree = F.absolute(adjacency).sum(axis=-1) + DEGREE_EPS
    inv_sqrt = degree ** -0.5
    n = adjacency.shape[-1]
    lead = adjacency.shape[:-2]
    return adjacency * inv_sqrt.reshape(lead + (n, 1)) * inv_sqrt.reshape(lead + (1, n))


def graph_filters(adjacency: Tensor) -> tuple[Tensor, Tensor]:
    """Complementary low-pass I + P and high-pass I - P filters."""
    prop = propagation_matrix(adjacency)
    eye = Tensor(np.eye(prop.shape[-1]))
    return eye + prop, eye - prop


def adaptive_filter_layer(x: Tensor, adjacency: Tensor, weight: Tensor) -> Tensor:
    """relu((X + P X) W) for node features X of shape (..., N, C)."""
    x = as_tensor(x)
    prop = propagation_matrix(adjacency)
    return F.relu((x + prop @ x) @ weight)


def mixed_filter(x: Tensor, adjacency: Tensor, alpha_low: float, alpha_high: float) -> Tensor:
    """alpha_low * F_L X + alpha_high * F_H X, the two-filter form that the signed layer collapses."""
    low, high = graph_filters(adjacency)
    return (low @ x) * alpha_low + (high @ x) * alpha_high
