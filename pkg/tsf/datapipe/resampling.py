from __future__ import annotations

import numpy as np

from tsf.datapipe.types import ImuStream, RawRecording
from tsf.exceptions import PreprocessingError


def resample_linear(stream: np.ndarray, from_hz: float, to_hz: float) -> np.ndarray:
    """Linearly interpolate a (3, T) stream from ``from_hz`` to ``to_hz``; ends are held constant."""
    stream = np.asarray(stream, dtype=np.float64)
    if from_hz <= 0 or to_hz <= 0:
        raise PreprocessingError(f"sample rates must be positive, got {from_hz} -> {to_hz}")
    length = stream.shape[-1]
    if length < 2:
        raise PreprocessingError(f"need at least 2 samples to interpolate, got {length}")
    if from_hz == to_hz:
        return stream.copy()
    target = int(round(length * to_hz / from_hz))
    source_t = np.arange(length) / from_hz
    target_t = np.arange(target) / to_hz
    return np.stack([np.interp(target_t, source_t, row) for row in stream.reshape(-1, length)]).reshape(
        stream.shape[:-1] + (target,))


def resample_recording(recording: RawRecording, to_hz: float) -> RawRecording:
    fs = recording.sample_rate_hz
    streams = [
        ImuStream(
            resample_linear(s.accelerometer, fs, to_hz),
            resample_linear(s.gyroscope, fs, to_hz),
            None if s.gravimeter is None else resample_linear(s.gravimeter, fs, to_hz),
        )
        for s in recording.streams
    ]
    return RawRecording(recording.subject_id, recording.trial_id, recording.activity, to_hz, streams)
