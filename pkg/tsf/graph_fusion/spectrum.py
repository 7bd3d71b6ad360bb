"""Graph Fourier analysis of a modality graph. Not used in the training path."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from tsf.exceptions import DimensionError
from tsf.graph_fusion.filters import DEGREE_EPS
from tsf.numerics.tensor import Tensor


def _array(value) -> np.ndarray:
    return np.asarray(value.data if isinstance(value, Tensor) else value, dtype=np.float64)


@dataclass
class ModalityGraph:
    """One signed modality graph: adjacency (N, N) and optional node features (N, C)."""

    adjacency: np.ndarray
    features: np.ndarray | None = None

    def __post_init__(self):
        self.adjacency = _array(self.adjacency)
        if self.adjacency.ndim != 2 or self.adjacency.shape[0] != self.adjacency.shape[1]:
            raise DimensionError(f"adjacency must be square, got {self.adjacency.shape}")
        if not np.array_equal(self.adjacency, self.adjacency.T):
            raise DimensionError("adjacency must be symmetric")
        if np.abs(self.adjacency).max(initial=0.0) > 1.0:
            raise DimensionError("adjacency entries must lie in [-1, 1]")
        if self.features is not None:
            self.features = _array(self.features)
            if self.features.ndim == 1:
                self.features = self.features[:, None]
            if self.features.shape[0] != self.num_nodes:
                raise DimensionError(f"signal has {self.features.shape[0]} nodes, graph has {self.num_nodes}")

    @property
    def num_nodes(self) -> int:
        return self.adjacency.shape[0]

    @property
    def degree(self) -> np.ndarray:
        return np.abs(self.adjacency).sum(axis=-1) + DEGREE_EPS

    @property
    def propagation(self) -> np.ndarray:
        inv_sqrt = self.degree ** -0.5
        return self.adjacency * inv_sqrt[:, None] * inv_sqrt[None, :]

    @property
    def laplacian(self) -> np.ndarray:
        return np.eye(self.num_nodes) - self.propagation


@dataclass
class GraphSpectrum:
    eigenvalues: np.ndarray  # (N,), ascending, within [0, 2]
    eigenvectors: np.ndarray  # (N, N), columns orthonormal
    coefficients: np.ndarray  # U^T X

    def reconstruct(self) -> np.ndarray:
        return self.eigenvectors @ self.coefficients

    def filter(self, response: Callable[[np.ndarray], np.ndarray]) -> np.ndarray:
        """U h(Lambda) U^T X for a spectral response ``h``."""
        gains = np.asarray(response(self.eigenvalues), dtype=np.float64)
        return self.eigenvectors @ (gains[:, None] * self.coefficients)

    def energy(self) -> np.ndarray:
        return (self.coefficients ** 2).sum(axis=-1)


def gft_analyze(adjacency, x) -> GraphSpectrum:
    graph = adjacency if isinstance(adjacency, ModalityGraph) else ModalityGraph(adjacency)
    graph = ModalityGraph(graph.adjacency, x)
    eigenvalues, eigenvectors = np.linalg.eigh(graph.laplacian)
    return GraphSpectrum(eigenvalues, eigenvectors, eigenvectors.T @ graph.features)
