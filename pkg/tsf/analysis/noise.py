"""Sensor attention and accuracy under injected sensor noise."""
from __future__ import annotations

import logging
from pathlib import Path

import numpy as np
import pandas as pd
from sklearn.metrics import f1_score

from tsf.analysis.report import AnalysisReport
from tsf.datapipe.noise import high_frequency_noise, low_frequency_noise
from tsf.datapipe.types import GRAV, GYRO, WindowSet
from tsf.exceptions import ConfigError
from tsf.model_train.network import TsfModel, predict
from tsf.utils.storage import RunStore, load_model

logger = logging.getLogger(__name__)

# gravimeter streams get high-frequency noise, gyroscope streams low-frequency drift
NOISE_KINDS = {"grav_high": GRAV, "gyro_low": GYRO}
DEFAULT_LEVELS = (0.0, 0.5, 1.0, 2.0)
NOISE_COLUMNS = ["noise_kind", "level", "wf1", "mean_attn_grav", "mean_attn_gyro"]


def inject_noise(windows: WindowSet, noise_kind: str, level: float, rng: np.random.Generator) -> WindowSet:
    """Add unit-variance band-limited noise scaled by ``level`` to one sensor kind of every window."""
    if noise_kind not in NOISE_KINDS:
        raise ConfigError(f"unknown noise kind {noise_kind!r}, expected one of {tuple(NOISE_KINDS)}")
    if level < 0:
        raise ConfigError(f"noise level must be non-negative, got {level}")
    if level == 0:
        return windows
    kind = NOISE_KINDS[noise_kind]
    data = windows.data.copy()
    shape = data[:, :, kind].shape
    if noise_kind == "grav_high":
        noise = high_frequency_noise(shape, windows.sample_rate_hz, rng)
    else:
        noise = low_frequency_noise(shape, windows.sample_rate_hz, rng)
    data[:, :, kind] += level * noise
    return windows.with_data(data)


def attention_summary(model: TsfModel, windows: WindowSet) -> tuple[np.ndarray, np.ndarray]:
    """Predictions and the (L, 2) sensor attention averaged over windows and IMUs."""
    predictions, diagnostics = predict(model, windows)
    attention = np.concatenate([d.attention for d in diagnostics], axis=0)
    return predictions, attention.mean(axis=(0, 1)).T


def attention_log(model: TsfModel, windows: WindowSet) -> pd.DataFrame:
    _, per_step = attention_summary(model, windows)
    return pd.DataFrame({"t": np.arange(len(per_step)), "attn_grav": per_step[:, 0], "attn_gyro": per_step[:, 1]})


def noise_study(model: TsfModel, windows: WindowSet, levels=DEFAULT_LEVELS, seed: int = 0) -> pd.DataFrame:
    rows = []
    for k, noise_kind in enumerate(NOISE_KINDS):
        for level in levels:
            rng = np.random.default_rng([seed, k])
            noisy = inject_noise(windows, noise_kind, float(level), rng)
            predictions, per_step = attention_summary(model, noisy)
            wf1 = f1_score(windows.labels, predictions, labels=np.unique(windows.labels), average="weighted",
                           zero_division=0)
            rows.append({
                "noise_kind": noise_kind,
                "level": float(level),
                "wf1": float(wf1),
                "mean_attn_grav": float(per_step[:, 0].mean()),
                "mean_attn_gyro": float(per_step[:, 1].mean()),
            })
            logger.info("%s level %.3g: WF1 %.4f, attention grav %.3f gyro %.3f", noise_kind, level, wf1,
                        rows[-1]["mean_attn_grav"], rows[-1]["mean_attn_gyro"])
    return pd.DataFrame(rows, columns=NOISE_COLUMNS)


def cmd_noise_study(model_path, dataset_path, levels=DEFAULT_LEVELS, out_dir: str | Path = ".",
                    seed: int = 0) -> AnalysisReport:
    model = load_model(model_path)
    windows = WindowSet.load(dataset_path)
    store = RunStore(out_dir)
    tables = {
        "noise": store.write_table("noise_attention.csv", noise_study(model, windows, levels, seed)),
        "attention_log": store.write_table("attention_log.csv", attention_log(model, windows)),
    }
    parameters = {"model": str(model_path), "dataset": str(dataset_path), "levels": [float(v) for v in levels],
                  "noise_kinds": list(NOISE_KINDS), "seed": seed}
    return AnalysisReport("noise_attention", parameters, tables).verify()
