"""Distribution of learned intra-edge and inter-edge weights per activity."""
from __future__ import annotations

import logging
from pathlib import Path

import numpy as np
import pandas as pd

from tsf.analysis.report import AnalysisReport
from tsf.datapipe.types import WindowSet
from tsf.exceptions import ContractError
from tsf.graph_fusion.adjacency import INTER, INTRA, edge_pairs
from tsf.model_train.network import TsfModel, predict
from tsf.utils.storage import RunStore, load_model

logger = logging.getLogger(__name__)

DEFAULT_BINS = 20
EDGE_COLUMNS = ["sample_id", "t", "i", "j", "weight", "edge_kind"]
HISTOGRAM_COLUMNS = ["activity", "edge_kind", "bin_left", "bin_right", "count"]


def activity_name(windows: WindowSet, label: int) -> str:
    if 0 <= label < len(windows.class_names):
        return windows.class_names[label]
    return str(label)


def select_activities(windows: WindowSet, activities=None) -> np.ndarray:
    """Indices of the windows whose label (or class name) is in ``activities``; all windows when None."""
    if not activities:
        return np.arange(len(windows))
    wanted = {str(a) for a in activities}
    keep = [k for k, label in enumerate(windows.labels)
            if str(int(label)) in wanted or activity_name(windows, int(label)) in wanted]
    return np.asarray(keep, dtype=int)


def collect_edges(model: TsfModel, windows: WindowSet) -> pd.DataFrame:
    """Every off-diagonal upper-triangle entry of the adjacency, per window and graph time step."""
    _, diagnostics = predict(model, windows)
    if any(d.adjacency is None for d in diagnostics):
        logger.warning("graph mode %r learns no adjacency; no edges collected", model.config.graph_mode)
        return pd.DataFrame(columns=EDGE_COLUMNS)
    adjacency = np.concatenate([d.adjacency for d in diagnostics], axis=0)
    samples, steps, nodes, _ = adjacency.shape
    frames = []
    for i, j, kind in edge_pairs(nodes):
        weight = adjacency[:, :, i, j]
        frames.append(pd.DataFrame({
            "sample_id": np.repeat(np.arange(samples), steps),
            "t": np.tile(np.arange(steps), samples),
            "i": i,
            "j": j,
            "weight": weight.reshape(-1),
            "edge_kind": kind,
        }))
    if not frames:
        return pd.DataFrame(columns=EDGE_COLUMNS)
    return pd.concat(frames, ignore_index=True)[EDGE_COLUMNS]


def edge_histograms(edges: pd.DataFrame, windows: WindowSet, bins: int = DEFAULT_BINS) -> pd.DataFrame:
    """Counts over ``bins`` equal bins spanning [-1, 1] for each (activity, edge kind)."""
    bin_edges = np.linspace(-1.0, 1.0, bins + 1)
    labels = windows.labels[edges["sample_id"].to_numpy(dtype=int)] if len(edges) else np.zeros(0, dtype=int)
    rows = []
    for label in np.unique(windows.labels):
        for kind in (INTRA, INTER):
            mask = (labels == label) & (edges["edge_kind"].to_numpy() == kind)
            if not mask.any():
                continue
            counts, _ = np.histogram(edges["weight"].to_numpy()[mask], bins=bin_edges)
            for left, right, count in zip(bin_edges[:-1], bin_edges[1:], counts):
                rows.append({"activity": activity_name(windows, int(label)), "edge_kind": kind,
                             "bin_left": left, "bin_right": right, "count": int(count)})
    return pd.DataFrame(rows, columns=HISTOGRAM_COLUMNS)


def cmd_edge_histograms(model_path, dataset_path, activities=None, out_dir: str | Path = ".",
                        bins: int = DEFAULT_BINS) -> AnalysisReport:
    model = load_model(model_path)
    windows = WindowSet.load(dataset_path)
    windows = windows.subset(select_activities(windows, activities))
    if len(windows) == 0:
        raise ContractError(f"no windows match the activity filter {list(activities)}")
    edges = collect_edges(model, windows)
    counts = edges["edge_kind"].value_counts()
    logger.info("Collected %s intra and %s inter edges over %s windows",
                int(counts.get(INTRA, 0)), int(counts.get(INTER, 0)), len(windows))
    store = RunStore(out_dir)
    tables = {
        "histograms": store.write_table("edge_histograms.csv", edge_histograms(edges, windows, bins)),
        "edges": store.write_table("edges.csv", edges),
    }
    parameters = {"model": str(model_path), "dataset": str(dataset_path), "bins": bins,
                  "activities": [str(a) for a in activities or []], "imu_count": model.config.imu_count}
    return AnalysisReport("edge_histograms", parameters, tables).verify()
