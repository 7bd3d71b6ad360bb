"""Single-level DB4 analysis along the time axis.

The transform is periodic: ``low[t] = sum_w x[(2t + 1 - w) mod L] * l[w]``
(and likewise for ``high``). Odd lengths get one symmetric sample appended on
the right first, so both outputs have ``ceil(L / 2)`` samples. For even ``L``
the stacked analysis operator is orthogonal and its transpose inverts it.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import pywt

from tsf.exceptions import ContractError, DimensionError
from tsf.numerics.tensor import Tensor, as_tensor

WAVELET = "db4"
FILTER_TOLERANCE = 1e-10


@dataclass(frozen=True)
class WaveletFilterPair:
    low: np.ndarray
    high: np.ndarray

    @property
    def width(self) -> int:
        return self.low.size

    def check(self) -> "WaveletFilterPair":
        checks = {
            "sum(low) == sqrt(2)": abs(self.low.sum() - np.sqrt(2.0)),
            "sum(high) == 0": abs(self.high.sum()),
            "|low| == 1": abs(self.low @ self.low - 1.0),
            "|high| == 1": abs(self.high @ self.high - 1.0),
            "<low, high> == 0": abs(self.low @ self.high),
        }
        failed = [name for name, err in checks.items() if err > FILTER_TOLERANCE]
        if failed:
            raise ContractError(f"wavelet filters violate {', '.join(failed)}")
        return self


@lru_cache(maxsize=None)
def wavelet_filters(name: str = WAVELET) -> WaveletFilterPair:
    wavelet = pywt.Wavelet(name)
    return WaveletFilterPair(np.array(wavelet.dec_lo, dtype=np.float64),
                             np.array(wavelet.dec_hi, dtype=np.float64)).check()


def output_length(length: int) -> int:
    return (length + 1) // 2


@lru_cache(maxsize=64)
def analysis_matrices(length: int, name: str = WAVELET) -> tuple[np.ndarray, np.ndarray]:
    """(low, high) matrices of shape (ceil(L/2), L) with the odd-length pad folded in."""
    if length < 2:
        raise DimensionError(f"dwt needs at least 2 samples, got {length}")
    filters = wavelet_filters(name)
    padded = length + length % 2
    half = padded // 2
    low = np.zeros((half, length))
    high = np.zeros((half, length))
    for t in range(half):
        for w in range(filters.width):
            source = (2 * t + 1 - w) % padded
            source = min(source, length - 1)  # the appended sample repeats the last one
            low[t, source] += filters.low[w]
            high[t, source] += filters.high[w]
    low.setflags(write=False)
    high.setflags(write=False)
    return low, high


@lru_cache(maxsize=64)
def pooling_matrix(length: int) -> np.ndarray:
    """Pairwise average pooling with the same odd-length padding as the wavelet step."""
    if length < 2:
        raise DimensionError(f"pooling needs at least 2 samples, got {length}")
    half = output_length(length)
    pool = np.zeros((half, length))
    for t in range(half):
        pool[t, 2 * t] += 0.5
        pool[t, min(2 * t + 1, length - 1)] += 0.5
    pool.setflags(write=False)
    return pool


def _apply(x: Tensor, matrix: np.ndarray) -> Tensor:
    """``x @ matrix.T`` over the last axis; a 1-D signal is treated as one row."""
    if x.ndim == 1:
        return (x.reshape(1, -1) @ Tensor(matrix.T)).reshape(-1)
    return x @ Tensor(matrix.T)


def dwt_step(x: Tensor, name: str = WAVELET) -> tuple[Tensor, Tensor]:
    """Split ``x`` (..., L) into low and high bands of length ceil(L/2)."""
    x = as_tensor(x)
    low, high = analysis_matrices(x.shape[-1], name)
    return _apply(x, low), _apply(x, high)


def pool_step(x: Tensor) -> Tensor:
    x = as_tensor(x)
    return _apply(x, pooling_matrix(x.shape[-1]))
