from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from tsf.datapipe.types import SensorWindow, WindowSet
from tsf.exceptions import PreprocessingError

STD_FLOOR = 1e-8


@dataclass(frozen=True)
class NormStats:
    """Per-sensor-kind statistics, pooled over IMUs, axes, time and windows."""

    mean: np.ndarray  # (K,)
    std: np.ndarray  # (K,)

    def apply(self, data: np.ndarray) -> np.ndarray:
        return (data - self.mean[:, None, None]) / self.std[:, None, None]

    def invert(self, data: np.ndarray) -> np.ndarray:
        return data * self.std[:, None, None] + self.mean[:, None, None]

    def as_dict(self) -> dict[str, list[float]]:
        return {"mean": self.mean.tolist(), "std": self.std.tolist()}


def _as_array(dataset) -> np.ndarray:
    if isinstance(dataset, WindowSet):
        return dataset.data
    if len(dataset) == 0:
        raise PreprocessingError("cannot normalize an empty dataset")
    return np.stack([w.data for w in dataset])


def fit_stats(dataset) -> NormStats:
    data = _as_array(dataset)
    if data.size == 0:
        raise PreprocessingError("cannot normalize an empty dataset")
    # population statistics over (window, imu, axis, time) per sensor kind
    mean = data.mean(axis=(0, 1, 3, 4))
    std = np.maximum(data.std(axis=(0, 1, 3, 4)), STD_FLOOR)
    return NormStats(mean, std)


def znormalize(dataset, stats: NormStats | None = None):
    """Normalize with ``stats`` (fitted on ``dataset`` when omitted); returns (dataset, stats)."""
    data = _as_array(dataset)
    if data.size == 0:
        raise PreprocessingError("cannot normalize an empty dataset")
    stats = stats if stats is not None else fit_stats(dataset)
    normalized = stats.apply(data)
    if isinstance(dataset, WindowSet):
        return dataset.with_data(normalized), stats
    return [
        SensorWindow(normalized[i], w.label, w.subject_id, w.trial_id, w.sample_rate_hz)
        for i, w in enumerate(dataset)
    ], stats
