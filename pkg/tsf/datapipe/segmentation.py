from __future__ import annotations

import logging
from typing import Iterable

import numpy as np

from tsf.datapipe.filters import butterworth_gravity_split
from tsf.datapipe.types import RawRecording, SensorWindow, WindowSet
from tsf.exceptions import PreprocessingError

logger = logging.getLogger(__name__)


def sensor_tensor(recording: RawRecording) -> np.ndarray:
    """Stack a recording into (P, K, 3, T) with K ordered gravity, gyroscope, linear acceleration.

    A recorded gravimeter is used as the gravity stream directly; otherwise
    gravity comes from the Butterworth split of the accelerometer.
    """
    per_imu = []
    for stream in recording.streams:
        if stream.gravimeter is not None:
            gravity = np.asarray(stream.gravimeter, dtype=np.float64)
            linear = stream.accelerometer - gravity
        else:
            gravity, linear = butterworth_gravity_split(stream.accelerometer, recording.sample_rate_hz)
        per_imu.append(np.stack([gravity, stream.gyroscope, linear]))
    return np.stack(per_imu)


def window_offsets(length: int, window: int, overlap: int) -> list[int]:
    if not 0 <= overlap < window:
        raise PreprocessingError(f"need 0 <= overlap < window, got overlap={overlap} window={window}")
    if window > length:
        return []
    stride = window - overlap
    return list(range(0, length - window + 1, stride))


def segment(recording: RawRecording, window: int, overlap: int) -> list[SensorWindow]:
    offsets = window_offsets(recording.length, window, overlap)
    if not offsets:
        logger.warning("Recording subject=%s trial=%s of length %s is shorter than window %s; no windows",
                       recording.subject_id, recording.trial_id, recording.length, window)
        return []
    data = sensor_tensor(recording)
    if not np.isfinite(data).all():
        raise PreprocessingError(f"non-finite samples in recording subject={recording.subject_id}")
    return [
        SensorWindow(data[..., start:start + window].copy(), recording.activity, recording.subject_id,
                     recording.trial_id, recording.sample_rate_hz)
        for start in offsets
    ]


def segment_all(recordings: Iterable[RawRecording], window: int, overlap: int,
                class_names: list[str] | None = None) -> WindowSet:
    windows: list[SensorWindow] = []
    for recording in recordings:
        windows.extend(segment(recording, window, overlap))
    if not windows:
        raise PreprocessingError(f"no recording is long enough for window {window}")
    logger.info("Segmented %s windows of length %s (overlap %s)", len(windows), window, overlap)
    return WindowSet.from_windows(windows, class_names)
