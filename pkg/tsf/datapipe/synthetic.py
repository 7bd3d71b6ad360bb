"""Synthetic multi-IMU activity generator for offline experiments.

Every class is a posture profile (slowly swaying roll/pitch around a base
pose) plus a body oscillation inside a class-specific frequency band. The
gravity vector follows the posture, the gyroscope measures the angle rates and
the accelerometer sees gravity plus oscillation.
"""
from __future__ import annotations

import logging

import numpy as np

from tsf.datapipe.noise import high_frequency_noise, low_frequency_noise
from tsf.datapipe.types import ClassSpec, ImuStream, RawRecording, SyntheticSpec

logger = logging.getLogger(__name__)

STANDARD_GRAVITY = 9.81


def gravity_from_angles(roll: np.ndarray, pitch: np.ndarray, g: float = STANDARD_GRAVITY) -> np.ndarray:
    """Gravity in the sensor frame for the given roll/pitch, shape (3, T)."""
    return g * np.stack([
        -np.sin(pitch),
        np.sin(roll) * np.cos(pitch),
        np.cos(roll) * np.cos(pitch),
    ])


def default_spec(**overrides) -> SyntheticSpec:
    """Four activities separated by frequency band and posture."""
    classes = [
        ClassSpec("still", (0.5, 0.8), amplitude=0.3, roll=0.0, pitch=0.0, sway_amp=0.05, sway_hz=0.1),
        ClassSpec("walk", (1.6, 2.2), amplitude=2.0, roll=0.1, pitch=-0.2, sway_amp=0.1, sway_hz=0.3),
        ClassSpec("run", (2.8, 3.4), amplitude=4.0, roll=0.2, pitch=-0.4, sway_amp=0.15, sway_hz=0.4),
        ClassSpec("lie", (6.0, 7.0), amplitude=1.0, roll=1.3, pitch=0.3, sway_amp=0.05, sway_hz=0.15),
    ]
    params = dict(classes=classes, subjects=3, trials_per_subject=2, sample_rate_hz=50.0, window=128,
                  overlap=64, duration_s=16.0)
    params.update(overrides)
    return SyntheticSpec(**params)


def _imu_stream(cls: ClassSpec, spec: SyntheticSpec, rng: np.random.Generator) -> ImuStream:
    fs = spec.sample_rate_hz
    t = np.arange(spec.samples) / fs

    freq = rng.uniform(*cls.freq_band_hz)
    phase = rng.uniform(0, 2 * np.pi)
    direction = rng.normal(size=3)
    direction /= np.linalg.norm(direction)
    amplitude = cls.amplitude * (1.0 + 0.1 * rng.standard_normal())
    wave = np.sin(2 * np.pi * freq * t + phase)
    oscillation = amplitude * direction[:, None] * wave[None, :]

    sway_phase = rng.uniform(0, 2 * np.pi, size=2)
    free_sway = np.sin(2 * np.pi * cls.sway_hz * t[None, :] + sway_phase[:, None])
    sway = cls.sway_amp * ((1.0 - abs(spec.coupling)) * free_sway + spec.coupling * wave[None, :])
    roll = cls.roll + sway[0]
    pitch = cls.pitch + sway[1]
    gravity = gravity_from_angles(roll, pitch)

    rates = np.stack([np.gradient(roll, 1.0 / fs), np.gradient(pitch, 1.0 / fs), np.zeros_like(t)])

    # noise is always drawn so that the noise level never shifts the rng stream
    gyro_noise = low_frequency_noise((3, t.size), fs, rng)
    grav_noise = high_frequency_noise((3, t.size), fs, rng)
    noisy_gravity = gravity + spec.grav_noise * grav_noise

    return ImuStream(
        accelerometer=noisy_gravity + oscillation,
        gyroscope=rates + spec.gyro_noise * gyro_noise,
        gravimeter=noisy_gravity if spec.with_gravimeter else None,
    )


def generate_synthetic(spec: SyntheticSpec, seed: int) -> list[RawRecording]:
    """Recordings for every (subject, trial, class); a pure function of (spec, seed)."""
    spec.validate()
    root = np.random.SeedSequence(seed)
    recordings = []
    jobs = [(s, r, c) for s in range(spec.subjects) for r in range(spec.trials_per_subject)
            for c in range(len(spec.classes))]
    for (subject, trial, label), child in zip(jobs, root.spawn(len(jobs))):
        rng = np.random.default_rng(child)
        streams = [_imu_stream(spec.classes[label], spec, rng) for _ in range(spec.imu_count)]
        recordings.append(RawRecording(subject, trial, label, spec.sample_rate_hz, streams))
    logger.info("Generated %s synthetic recordings (%s subjects, %s classes, seed %s)",
                len(recordings), spec.subjects, len(spec.classes), seed)
    return recordings
