from __future__ import annotations

import numpy as np

from tsf.exceptions import DimensionError
from tsf.numerics.modules import Conv1d, Module
from tsf.numerics.tensor import Tensor, as_tensor


class LocalFusion(Module):
    """Same-length convolution over the primary band plus a 1x1 projection of the secondary band."""

    def __init__(self, c_in: int, c_out: int, rng: np.random.Generator, width: int = 5):
        self.conv = Conv1d(c_in, c_out, width, rng)
        self.project = Conv1d(c_in, c_out, 1, rng)

    def forward(self, primary: Tensor, secondary: Tensor | None = None) -> Tensor:
        primary = as_tensor(primary)
        out = self.conv(primary)
        if secondary is None:
            return out
        secondary = as_tensor(secondary)
        if secondary.shape != primary.shape:
            raise DimensionError(f"secondary band {secondary.shape} does not match primary {primary.shape}")
        return out + self.project(secondary)


def local_fusion(primary: Tensor, secondary: Tensor | None, block: LocalFusion) -> Tensor:
    return block(primary, secondary)
