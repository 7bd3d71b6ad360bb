"""Input spectra of the windows grouped by their inferred wavelet route."""
from __future__ import annotations

import logging
from pathlib import Path

import numpy as np
import pandas as pd
from scipy.signal import periodogram

from tsf.analysis.report import AnalysisReport
from tsf.datapipe.types import SENSOR_KINDS, WindowSet
from tsf.exceptions import ConfigError
from tsf.model_train.network import TsfModel, predict
from tsf.temporal_fusion.selection import WaveletRoute
from tsf.utils.storage import RunStore, load_model

logger = logging.getLogger(__name__)

AXES = "xyz"
DEFAULT_CHANNEL = "lacc_x"
NO_ROUTE = "none"
SPECTRUM_COLUMNS = ["route", "freq_bin_hz", "mean_magnitude", "sample_count"]
ROUTE_COLUMNS = ["sample_id", "level", "selection"]
BAND_COLUMNS = ["route", "sample_count", "band_low_hz", "band_high_hz"]


def parse_channel(channel: str) -> tuple[int, int]:
    """``"gyro_y"`` -> (sensor kind index, axis index)."""
    kind, _, axis = channel.partition("_")
    if kind not in SENSOR_KINDS or len(axis) != 1 or axis not in AXES:
        raise ConfigError(f"channel must look like <{'|'.join(SENSOR_KINDS)}>_<x|y|z>, got {channel!r}")
    return SENSOR_KINDS.index(kind), AXES.index(axis)


def route_label(route: WaveletRoute) -> str:
    return str(route) or NO_ROUTE


def route_band(route: WaveletRoute, sample_rate_hz: float) -> tuple[float, float]:
    """Nominal frequency band of the input kept by ``route``.

    Taking the high band mirrors the spectrum of the decimated signal, so a
    later low choice keeps the upper part of that band.
    """
    low, high, mirrored = 0.0, sample_rate_hz / 2.0, False
    for selection in route.selections:
        middle = (low + high) / 2.0
        upper = (selection == "H") != mirrored
        low, high = (middle, high) if upper else (low, middle)
        mirrored = mirrored != (selection == "H")
    return low, high


def magnitude_spectrum(signal: np.ndarray, sample_rate_hz: float) -> tuple[np.ndarray, np.ndarray]:
    """Frequencies and amplitude spectrum of the last axis of ``signal``."""
    freqs, power = periodogram(signal, fs=sample_rate_hz, scaling="spectrum", axis=-1)
    return freqs, np.sqrt(power)


def infer_routes(model: TsfModel, windows: WindowSet) -> list[WaveletRoute]:
    _, diagnostics = predict(model, windows)
    return [route for d in diagnostics for route in d.routes]


def route_spectra(windows: WindowSet, routes: list[WaveletRoute], channel: str = DEFAULT_CHANNEL,
                  imu: int = 0) -> pd.DataFrame:
    kind, axis = parse_channel(channel)
    if not 0 <= imu < windows.imu_count:
        raise ConfigError(f"imu {imu} out of range for {windows.imu_count} IMUs")
    freqs, magnitude = magnitude_spectrum(windows.data[:, imu, kind, axis], windows.sample_rate_hz)
    labels = np.array([route_label(r) for r in routes])
    frames = []
    for label in sorted(set(labels)):
        members = labels == label
        frames.append(pd.DataFrame({
            "route": label,
            "freq_bin_hz": freqs,
            "mean_magnitude": magnitude[members].mean(axis=0),
            "sample_count": int(members.sum()),
        }))
    if not frames:
        return pd.DataFrame(columns=SPECTRUM_COLUMNS)
    return pd.concat(frames, ignore_index=True)[SPECTRUM_COLUMNS]


def route_bands(routes: list[WaveletRoute], sample_rate_hz: float) -> pd.DataFrame:
    by_label: dict[str, list[WaveletRoute]] = {}
    for route in routes:
        by_label.setdefault(route_label(route), []).append(route)
    rows = []
    for label in sorted(by_label):
        low, high = route_band(by_label[label][0], sample_rate_hz)
        rows.append({"route": label, "sample_count": len(by_label[label]), "band_low_hz": low, "band_high_hz": high})
    return pd.DataFrame(rows, columns=BAND_COLUMNS)


def route_dump(routes: list[WaveletRoute]) -> pd.DataFrame:
    rows = [{"sample_id": k, "level": level, "selection": selection}
            for k, route in enumerate(routes) for level, selection in enumerate(route.selections)]
    return pd.DataFrame(rows, columns=ROUTE_COLUMNS)


def cmd_route_spectra(model_path, dataset_path, out_dir: str | Path = ".", channel: str = DEFAULT_CHANNEL,
                      imu: int = 0) -> AnalysisReport:
    model = load_model(model_path)
    windows = WindowSet.load(dataset_path)
    routes = infer_routes(model, windows)
    bands = route_bands(routes, windows.sample_rate_hz)
    for row in bands.itertuples():
        logger.info("route %s: %s windows, nominal band %.2f-%.2f Hz", row.route, row.sample_count,
                    row.band_low_hz, row.band_high_hz)
    store = RunStore(out_dir)
    tables = {
        "spectra": store.write_table("route_spectra.csv", route_spectra(windows, routes, channel, imu)),
        "bands": store.write_table("route_bands.csv", bands),
        "routes": store.write_table("routes.csv", route_dump(routes)),
    }
    parameters = {"model": str(model_path), "dataset": str(dataset_path), "channel": channel, "imu": imu}
    return AnalysisReport("route_spectra", parameters, tables).verify()
