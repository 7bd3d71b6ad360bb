"""CSV ingestion and emission of raw recordings.

Schema (UTF-8, header row, ``.`` decimal separator)::

    subject,trial,activity,timestamp_s,imu_id,acc_x,acc_y,acc_z,gyr_x,gyr_y,gyr_z[,grav_x,grav_y,grav_z]

Rows of one (subject, trial, activity, imu_id) group form one stream and must
be strictly increasing in ``timestamp_s``. Row numbers in errors are 1-based
file lines, the header being line 1.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

import numpy as np
import pandas as pd

from tsf.datapipe.types import ImuStream, RawRecording
from tsf.exceptions import IngestionError

logger = logging.getLogger(__name__)

KEY_COLUMNS = ["subject", "trial", "activity", "timestamp_s", "imu_id"]
ACC_COLUMNS = ["acc_x", "acc_y", "acc_z"]
GYR_COLUMNS = ["gyr_x", "gyr_y", "gyr_z"]
GRAV_COLUMNS = ["grav_x", "grav_y", "grav_z"]
REQUIRED_COLUMNS = KEY_COLUMNS + ACC_COLUMNS + GYR_COLUMNS
FLOAT_FORMAT = "%.12g"


@dataclass
class ColumnMap:
    """Maps file column names onto the canonical schema names."""

    renames: dict[str, str] = field(default_factory=dict)

    def apply(self, frame: pd.DataFrame) -> pd.DataFrame:
        return frame.rename(columns=self.renames) if self.renames else frame


def _file_row(index) -> int:
    return int(index) + 2


def _validate(frame: pd.DataFrame) -> bool:
    missing = [c for c in REQUIRED_COLUMNS if c not in frame.columns]
    if missing:
        raise IngestionError(f"missing columns: {', '.join(missing)}", row=1)
    present_grav = [c for c in GRAV_COLUMNS if c in frame.columns]
    if present_grav and len(present_grav) != 3:
        raise IngestionError(f"gravimeter columns must come as a triple, found {present_grav}", row=1)
    columns = REQUIRED_COLUMNS + present_grav
    nan_rows = frame.index[frame[columns].isna().any(axis=1)]
    if len(nan_rows):
        bad = frame.loc[nan_rows[0], columns]
        raise IngestionError(f"empty or NaN cell in column {bad[bad.isna()].index[0]}", row=_file_row(nan_rows[0]))
    for column in columns:
        if not pd.api.types.is_numeric_dtype(frame[column]):
            converted = pd.to_numeric(frame[column], errors="coerce")
            bad_rows = frame.index[converted.isna()]
            if len(bad_rows):
                raise IngestionError(f"non-numeric value in column {column}", row=_file_row(bad_rows[0]))
            frame[column] = converted
    return bool(present_grav)


def load_csv(path: str | Path, schema: ColumnMap | None = None,
             sample_rate_hz: float | None = None) -> list[RawRecording]:
    path = Path(path)
    if not path.exists():
        raise IngestionError(f"file not found: {path}")
    try:
        frame = pd.read_csv(path, encoding="utf-8")
    except (pd.errors.ParserError, pd.errors.EmptyDataError, UnicodeDecodeError) as exc:
        raise IngestionError(f"{path}: {exc}") from exc
    frame = (schema or ColumnMap()).apply(frame)
    has_grav = _validate(frame)

    streams: dict[tuple[int, int, int], dict[int, pd.DataFrame]] = {}
    for (subject, trial, activity, imu), group in frame.groupby(
            ["subject", "trial", "activity", "imu_id"], sort=False):
        steps = np.diff(group["timestamp_s"].to_numpy(dtype=np.float64))
        bad = np.flatnonzero(steps <= 0)
        if bad.size:
            raise IngestionError(
                f"timestamps not strictly increasing for subject={subject} trial={trial} imu={imu}",
                row=_file_row(group.index[bad[0] + 1]))
        streams.setdefault((int(subject), int(trial), int(activity)), {})[int(imu)] = group

    recordings = []
    for (subject, trial, activity), per_imu in streams.items():
        groups = [per_imu[k] for k in sorted(per_imu)]
        if len({len(g) for g in groups}) != 1:
            raise IngestionError(
                f"IMUs of subject={subject} trial={trial} activity={activity} differ in length",
                row=_file_row(groups[0].index[0]))
        rate = sample_rate_hz or _infer_rate(groups[0])
        recordings.append(RawRecording(
            subject, trial, activity, rate,
            [ImuStream(g[ACC_COLUMNS].to_numpy(dtype=np.float64).T.copy(),
                       g[GYR_COLUMNS].to_numpy(dtype=np.float64).T.copy(),
                       g[GRAV_COLUMNS].to_numpy(dtype=np.float64).T.copy() if has_grav else None)
             for g in groups],
        ))
    logger.info("Loaded %s recordings from %s", len(recordings), path)
    return recordings


def _infer_rate(group: pd.DataFrame) -> float:
    steps = np.diff(group["timestamp_s"].to_numpy(dtype=np.float64))
    if steps.size == 0:
        raise IngestionError("cannot infer the sample rate from a single row; declare it in the manifest",
                             row=_file_row(group.index[0]))
    return float(1.0 / np.median(steps))


def recordings_frame(recordings: Iterable[RawRecording]) -> pd.DataFrame:
    frames = []
    for rec in recordings:
        t = np.arange(rec.length) / rec.sample_rate_hz
        for imu, stream in enumerate(rec.streams):
            part = {"subject": rec.subject_id, "trial": rec.trial_id, "activity": rec.activity,
                    "timestamp_s": t, "imu_id": imu}
            part.update(zip(ACC_COLUMNS, stream.accelerometer))
            part.update(zip(GYR_COLUMNS, stream.gyroscope))
            if stream.gravimeter is not None:
                part.update(zip(GRAV_COLUMNS, stream.gravimeter))
            frames.append(pd.DataFrame(part))
    return pd.concat(frames, ignore_index=True)


def write_csv(recordings: Iterable[RawRecording], path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    recordings_frame(recordings).to_csv(path, index=False, float_format=FLOAT_FORMAT, encoding="utf-8")
    return path
