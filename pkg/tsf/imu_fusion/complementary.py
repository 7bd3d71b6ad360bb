"""Classical complementary filter used as a reference for the learned block."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from tsf.datapipe.segmentation import sensor_tensor
from tsf.datapipe.types import GRAV, GYRO, RawRecording
from tsf.exceptions import DimensionError, PreprocessingError


@dataclass(frozen=True)
class ComplementaryFilterParams:
    tau: float  # time constant in seconds
    dt: float  # sampling interval in seconds

    def __post_init__(self):
        if self.tau <= 0 or self.dt <= 0:
            raise PreprocessingError(f"tau and dt must be positive, got tau={self.tau} dt={self.dt}")

    @property
    def alpha(self) -> float:
        return self.tau / (self.tau + self.dt)

    @classmethod
    def from_alpha(cls, alpha: float, dt: float) -> "ComplementaryFilterParams":
        if not 0 < alpha < 1:
            raise PreprocessingError(f"alpha must lie in (0, 1), got {alpha}")
        return cls(alpha * dt / (1.0 - alpha), dt)


def _check_pair(grav_ang: np.ndarray, gyro: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    grav_ang = np.atleast_2d(np.asarray(grav_ang, dtype=np.float64))
    gyro = np.atleast_2d(np.asarray(gyro, dtype=np.float64))
    if grav_ang.shape != gyro.shape:
        raise DimensionError(f"angle and rate streams differ in shape: {grav_ang.shape} vs {gyro.shape}")
    if grav_ang.shape[-1] < 1:
        raise DimensionError("streams must hold at least one sample")
    return grav_ang, gyro


def complementary_filter(grav_ang: np.ndarray, gyro: np.ndarray, params: ComplementaryFilterParams) -> np.ndarray:
    """att(0) = grav_ang(0); att(t) = a * (att(t-1) + gyro(t) * dt) + (1 - a) * grav_ang(t)."""
    grav_ang, gyro = _check_pair(grav_ang, gyro)
    alpha, dt = params.alpha, params.dt
    att = np.empty_like(grav_ang)
    att[:, 0] = grav_ang[:, 0]
    for t in range(1, grav_ang.shape[-1]):
        att[:, t] = alpha * (att[:, t - 1] + gyro[:, t] * dt) + (1.0 - alpha) * grav_ang[:, t]
    return att


def complementary_filter_expanded(grav_ang: np.ndarray, gyro: np.ndarray,
                                  params: ComplementaryFilterParams) -> np.ndarray:
    """Closed form of :func:`complementary_filter` as weighted sums over the whole history."""
    grav_ang, gyro = _check_pair(grav_ang, gyro)
    alpha, dt = params.alpha, params.dt
    length = grav_ang.shape[-1]
    t = np.arange(length)
    lag = t[:, None] - t[None, :]
    # decay[t, i] = alpha ** (t - i) for 1 <= i <= t
    decay = np.where((lag >= 0) & (t[None, :] >= 1), alpha ** np.maximum(lag, 0), 0.0)
    drive = alpha * dt * gyro + (1.0 - alpha) * grav_ang
    return (alpha ** t)[None, :] * grav_ang[:, :1] + drive @ decay.T


def grav_to_angles(gravity: np.ndarray) -> np.ndarray:
    """(roll, pitch) in radians from a (3, T) gravity stream."""
    gravity = np.asarray(gravity, dtype=np.float64)
    if gravity.ndim != 2 or gravity.shape[0] != 3:
        raise DimensionError(f"gravity must be 3 x T, got {gravity.shape}")
    if (np.linalg.norm(gravity, axis=0) == 0).any():
        raise PreprocessingError("gravity vector is zero at some timestamp")
    gx, gy, gz = gravity
    roll = np.arctan2(gy, gz)
    pitch = np.arctan2(-gx, np.sqrt(gy * gy + gz * gz))
    return np.stack([roll, pitch])


def estimate_attitude(recording: RawRecording, tau: float = 1.0) -> np.ndarray:
    """Filtered (roll, pitch) per IMU, shape (P, 2, T), from gravity angles and x/y gyroscope rates."""
    params = ComplementaryFilterParams(tau, 1.0 / recording.sample_rate_hz)
    sensors = sensor_tensor(recording)
    return np.stack([
        complementary_filter(grav_to_angles(imu[GRAV]), imu[GYRO][:2], params)
        for imu in sensors
    ])
