from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterator, Sequence

import numpy as np

from tsf.exceptions import DimensionError, ModelFileError, SpecError

# sensor-kind axis of a window
GRAV, GYRO, LACC = 0, 1, 2
SENSOR_KINDS = ("grav", "gyro", "lacc")


@dataclass
class ImuStream:
    accelerometer: np.ndarray
    gyroscope: np.ndarray
    gravimeter: np.ndarray | None = None

    @property
    def length(self) -> int:
        return self.accelerometer.shape[-1]


@dataclass
class RawRecording:
    """One continuous multi-IMU recording of a single activity."""

    subject_id: int
    trial_id: int
    activity: int
    sample_rate_hz: float
    streams: list[ImuStream]

    def __post_init__(self):
        if self.sample_rate_hz <= 0:
            raise DimensionError(f"sample rate must be positive, got {self.sample_rate_hz}")
        if not self.streams:
            raise DimensionError("a recording needs at least one IMU stream")
        lengths = set()
        for stream in self.streams:
            for name in ("accelerometer", "gyroscope", "gravimeter"):
                arr = getattr(stream, name)
                if arr is None:
                    continue
                if arr.ndim != 2 or arr.shape[0] != 3:
                    raise DimensionError(f"{name} must be 3 x T, got {arr.shape}")
                lengths.add(arr.shape[1])
        if len(lengths) != 1:
            raise DimensionError(f"streams of one recording differ in length: {sorted(lengths)}")

    @property
    def length(self) -> int:
        return self.streams[0].length

    @property
    def imu_count(self) -> int:
        return len(self.streams)

    @property
    def has_gravimeter(self) -> bool:
        return all(s.gravimeter is not None for s in self.streams)


@dataclass
class SensorWindow:
    data: np.ndarray  # P x K x 3 x L
    label: int
    subject_id: int
    trial_id: int
    sample_rate_hz: float

    @property
    def window(self) -> int:
        return self.data.shape[-1]


@dataclass
class WindowSet:
    """Stacked windows: ``data`` is (n, P, K, 3, L)."""

    data: np.ndarray
    labels: np.ndarray
    subjects: np.ndarray
    trials: np.ndarray
    sample_rate_hz: float
    class_names: list[str] = field(default_factory=list)

    def __post_init__(self):
        self.data = np.asarray(self.data, dtype=np.float64)
        self.labels = np.asarray(self.labels, dtype=np.int64)
        self.subjects = np.asarray(self.subjects, dtype=np.int64)
        self.trials = np.asarray(self.trials, dtype=np.int64)
        if self.data.ndim != 5 or self.data.shape[2] != 3 or self.data.shape[3] != 3:
            raise DimensionError(f"window data must be (n, P, 3, 3, L), got {self.data.shape}")
        n = self.data.shape[0]
        if not (len(self.labels) == len(self.subjects) == len(self.trials) == n):
            raise DimensionError("labels, subjects and trials must have one entry per window")

    def __len__(self) -> int:
        return self.data.shape[0]

    @property
    def imu_count(self) -> int:
        return self.data.shape[1]

    @property
    def window(self) -> int:
        return self.data.shape[-1]

    @property
    def num_classes(self) -> int:
        if self.class_names:
            return len(self.class_names)
        return int(self.labels.max()) + 1 if len(self) else 0

    @classmethod
    def from_windows(cls, windows: Sequence[SensorWindow], class_names: list[str] | None = None) -> "WindowSet":
        if not windows:
            raise SpecError("cannot stack an empty list of windows")
        return cls(
            data=np.stack([w.data for w in windows]),
            labels=np.array([w.label for w in windows]),
            subjects=np.array([w.subject_id for w in windows]),
            trials=np.array([w.trial_id for w in windows]),
            sample_rate_hz=windows[0].sample_rate_hz,
            class_names=list(class_names or []),
        )

    def windows(self) -> Iterator[SensorWindow]:
        for i in range(len(self)):
            yield SensorWindow(self.data[i], int(self.labels[i]), int(self.subjects[i]),
                               int(self.trials[i]), self.sample_rate_hz)

    def subset(self, index) -> "WindowSet":
        index = np.asarray(index)
        return WindowSet(self.data[index], self.labels[index], self.subjects[index], self.trials[index],
                         self.sample_rate_hz, list(self.class_names))

    def with_data(self, data: np.ndarray) -> "WindowSet":
        return WindowSet(data, self.labels, self.subjects, self.trials, self.sample_rate_hz, list(self.class_names))

    def save(self, path: str | Path) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("wb") as fh:
            np.savez(fh, data=self.data, labels=self.labels, subjects=self.subjects, trials=self.trials,
                     sample_rate_hz=np.array(self.sample_rate_hz), class_names=np.array(self.class_names, dtype=str))
        return path

    @classmethod
    def load(cls, path: str | Path) -> "WindowSet":
        path = Path(path)
        if not path.exists():
            raise ModelFileError(f"windows file not found: {path}")
        try:
            with np.load(path, allow_pickle=False) as archive:
                return cls(archive["data"], archive["labels"], archive["subjects"], archive["trials"],
                           float(archive["sample_rate_hz"]), [str(c) for c in archive["class_names"]])
        except (KeyError, ValueError, OSError) as exc:
            raise ModelFileError(f"{path}: not a windows archive ({exc})") from exc


@dataclass
class ClassSpec:
    """One synthetic activity: oscillation band, amplitude and posture profile."""

    name: str
    freq_band_hz: tuple[float, float]
    amplitude: float = 1.0
    roll: float = 0.0
    pitch: float = 0.0
    sway_amp: float = 0.1
    sway_hz: float = 0.2


@dataclass
class SyntheticSpec:
    classes: list[ClassSpec]
    grav_noise: float = 0.0  # high-frequency noise std on the gravity stream
    gyro_noise: float = 0.0  # low-frequency noise std on the gyroscope
    subjects: int = 3
    trials_per_subject: int = 1
    sample_rate_hz: float = 50.0
    window: int = 128
    overlap: int = 64
    imu_count: int = 1
    duration_s: float = 10.0
    with_gravimeter: bool = False
    coupling: float = 0.0  # correlation of posture sway with the motion oscillation, in [-1, 1]

    @property
    def nyquist_hz(self) -> float:
        return self.sample_rate_hz / 2.0

    @property
    def samples(self) -> int:
        return int(round(self.duration_s * self.sample_rate_hz))

    def validate(self) -> None:
        if not self.classes:
            raise SpecError("at least one class is required")
        if self.sample_rate_hz <= 0 or self.subjects < 1 or self.trials_per_subject < 1 or self.imu_count < 1:
            raise SpecError("sample rate and all counts must be positive")
        if self.grav_noise < 0 or self.gyro_noise < 0:
            raise SpecError("noise levels must be non-negative")
        if not -1.0 <= self.coupling <= 1.0:
            raise SpecError(f"coupling must lie in [-1, 1], got {self.coupling}")
        for cls in self.classes:
            lo, hi = cls.freq_band_hz
            if not 0 < lo <= hi:
                raise SpecError(f"class {cls.name}: invalid band {cls.freq_band_hz}")
            if hi >= self.nyquist_hz or cls.sway_hz >= self.nyquist_hz:
                raise SpecError(f"class {cls.name}: frequency {max(hi, cls.sway_hz)} Hz >= Nyquist {self.nyquist_hz} Hz")
        if not 0 <= self.overlap < self.window:
            raise SpecError(f"need 0 <= overlap < window, got overlap={self.overlap} window={self.window}")
