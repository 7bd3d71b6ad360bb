"""Zero-phase Butterworth filtering used to split gravity from body motion."""
from __future__ import annotations

import numpy as np
from scipy.signal import butter, filtfilt

from tsf.exceptions import PreprocessingError

GRAVITY_CUTOFF_HZ = 0.3
FILTER_ORDER = 3


def _check(signal: np.ndarray, sample_rate_hz: float, cutoff_hz: float, order: int) -> None:
    if sample_rate_hz <= 2 * cutoff_hz:
        raise PreprocessingError(
            f"sample rate {sample_rate_hz} Hz must exceed twice the {cutoff_hz} Hz cutoff")
    if signal.shape[-1] <= 6 * order:
        raise PreprocessingError(
            f"signal of length {signal.shape[-1]} is too short for an order-{order} filter (need > {6 * order})")


def lowpass(signal: np.ndarray, sample_rate_hz: float, cutoff_hz: float, order: int = FILTER_ORDER) -> np.ndarray:
    _check(signal, sample_rate_hz, cutoff_hz, order)
    b, a = butter(order, cutoff_hz, btype="low", fs=sample_rate_hz)
    return filtfilt(b, a, signal, axis=-1)


def highpass(signal: np.ndarray, sample_rate_hz: float, cutoff_hz: float, order: int = FILTER_ORDER) -> np.ndarray:
    _check(signal, sample_rate_hz, cutoff_hz, order)
    b, a = butter(order, cutoff_hz, btype="high", fs=sample_rate_hz)
    return filtfilt(b, a, signal, axis=-1)


def butterworth_gravity_split(accel: np.ndarray, sample_rate_hz: float,
                              cutoff_hz: float = GRAVITY_CUTOFF_HZ) -> tuple[np.ndarray, np.ndarray]:
    """Return (gravity, linear) with gravity = low-pass(accel) and linear = accel - gravity."""
    accel = np.asarray(accel, dtype=np.float64)
    gravity = lowpass(accel, sample_rate_hz, cutoff_hz)
    return gravity, accel - gravity
