"""Band-limited noise generators.

Each generator returns rows scaled to unit standard deviation, so a caller
multiplying by ``level`` injects noise of variance exactly ``level ** 2``.
"""
from __future__ import annotations

import numpy as np

from tsf.datapipe.filters import highpass, lowpass

LOW_FREQUENCY_CUTOFF_HZ = 0.5


def _unit_rows(noise: np.ndarray) -> np.ndarray:
    noise = noise - noise.mean(axis=-1, keepdims=True)
    std = noise.std(axis=-1, keepdims=True)
    return noise / np.maximum(std, 1e-12)


def low_frequency_noise(shape: tuple[int, ...], sample_rate_hz: float, rng: np.random.Generator,
                        cutoff_hz: float = LOW_FREQUENCY_CUTOFF_HZ) -> np.ndarray:
    """Random walk low-passed at ``cutoff_hz`` (gyroscope drift)."""
    walk = np.cumsum(rng.standard_normal(shape), axis=-1)
    return _unit_rows(lowpass(walk, sample_rate_hz, cutoff_hz))


def high_frequency_noise(shape: tuple[int, ...], sample_rate_hz: float, rng: np.random.Generator,
                         cutoff_hz: float | None = None) -> np.ndarray:
    """White noise high-passed at ``fs / 4`` unless ``cutoff_hz`` is given."""
    cutoff_hz = sample_rate_hz / 4.0 if cutoff_hz is None else cutoff_hz
    return _unit_rows(highpass(rng.standard_normal(shape), sample_rate_hz, cutoff_hz))
