from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Callable, Iterator

import numpy as np
from sklearn.model_selection import KFold, LeaveOneGroupOut, train_test_split

from tsf.datapipe.normalization import znormalize
from tsf.datapipe.types import WindowSet
from tsf.exceptions import ContractError
from tsf.model_train.config import TsfConfig
from tsf.model_train.trainer import DataSplits, FoldResult, train

logger = logging.getLogger(__name__)

HOLDOUT_FRACTION = 0.2

Fold = tuple[str, np.ndarray, np.ndarray]
FoldCallback = Callable[[int, FoldResult], None]


@dataclass
class CvReport:
    protocol: str  # loso, kfold or holdout
    runs: list[list[FoldResult]] = field(default_factory=list)

    @property
    def run_macro_f1(self) -> list[float]:
        return [float(np.mean([f.macro_f1 for f in folds])) for folds in self.runs]

    @property
    def run_weighted_f1(self) -> list[float]:
        return [float(np.mean([f.weighted_f1 for f in folds])) for folds in self.runs]

    def summary(self) -> dict[str, float]:
        macro, weighted = self.run_macro_f1, self.run_weighted_f1
        return {
            "macro_f1_mean": float(np.mean(macro)),
            "macro_f1_std": float(np.std(macro)),
            "weighted_f1_mean": float(np.mean(weighted)),
            "weighted_f1_std": float(np.std(weighted)),
        }


def loso_folds(windows: WindowSet) -> list[Fold]:
    splitter = LeaveOneGroupOut()
    folds = []
    for train_idx, test_idx in splitter.split(np.zeros(len(windows)), groups=windows.subjects):
        subject = int(windows.subjects[test_idx[0]])
        folds.append((f"subject-{subject}", train_idx, test_idx))
    return folds


def kfold_folds(windows: WindowSet, k: int, seed: int) -> list[Fold]:
    """k folds over subjects, each test fold holding whole subjects."""
    subjects = np.unique(windows.subjects)
    splitter = KFold(n_splits=min(k, len(subjects)), shuffle=True, random_state=seed)
    folds = []
    for fold, (_, test_subjects) in enumerate(splitter.split(subjects)):
        test_mask = np.isin(windows.subjects, subjects[test_subjects])
        folds.append((f"fold-{fold}", np.flatnonzero(~test_mask), np.flatnonzero(test_mask)))
    return folds


def holdout_folds(windows: WindowSet, seed: int) -> list[Fold]:
    index = np.arange(len(windows))
    try:
        train_idx, test_idx = train_test_split(index, test_size=HOLDOUT_FRACTION, random_state=seed,
                                               stratify=windows.labels)
    except ValueError:
        train_idx, test_idx = train_test_split(index, test_size=HOLDOUT_FRACTION, random_state=seed)
    return [("holdout", np.sort(train_idx), np.sort(test_idx))]


def _normalized_splits(windows: WindowSet, train_idx: np.ndarray, test_idx: np.ndarray) -> DataSplits:
    train_set, stats = znormalize(windows.subset(train_idx))
    test_set, _ = znormalize(windows.subset(test_idx), stats)
    return DataSplits(train_set, None, test_set)


def iterate_runs(config: TsfConfig) -> Iterator[tuple[int, TsfConfig]]:
    for run in range(config.runs):
        yield run, config.replace(seed=config.seed + run)


def run_folds(windows: WindowSet, folds: list[Fold], config: TsfConfig, protocol: str,
              on_fold: FoldCallback | None = None) -> CvReport:
    report = CvReport(protocol)
    for run, run_config in iterate_runs(config):
        results = []
        for fold_id, train_idx, test_idx in folds:
            if len(train_idx) == 0 or len(test_idx) == 0:
                raise ContractError(f"{fold_id}: empty train or test split")
            logger.info("%s run %s/%s %s: %s train / %s test windows", protocol, run + 1, config.runs,
                        fold_id, len(train_idx), len(test_idx))
            _, result = train(_normalized_splits(windows, train_idx, test_idx), run_config, fold_id)
            logger.info("%s run %s %s: macro F1 %.4f, weighted F1 %.4f", protocol, run + 1, fold_id,
                        result.macro_f1, result.weighted_f1)
            results.append(result)
            if on_fold is not None:
                on_fold(run, result)
        report.runs.append(results)
    return report


def loso_cv(windows: WindowSet, config: TsfConfig, on_fold: FoldCallback | None = None) -> CvReport:
    """Leave-one-subject-out, repeated ``config.runs`` times with consecutive seeds."""
    if len(np.unique(windows.subjects)) < 2:
        logger.warning("Only one subject present; using a stratified %d/%d train/test split instead of LOSO",
                       round(100 * (1 - HOLDOUT_FRACTION)), round(100 * HOLDOUT_FRACTION))
        return run_folds(windows, holdout_folds(windows, config.seed), config, "holdout", on_fold)
    return run_folds(windows, loso_folds(windows), config, "loso", on_fold)


def k_fold_cv(windows: WindowSet, config: TsfConfig, k: int | None = None,
              on_fold: FoldCallback | None = None) -> CvReport:
    if len(np.unique(windows.subjects)) < 2:
        logger.warning("Only one subject present; using a stratified train/test split instead of k-fold")
        return run_folds(windows, holdout_folds(windows, config.seed), config, "holdout", on_fold)
    return run_folds(windows, kfold_folds(windows, k or config.folds, config.seed), config, "kfold", on_fold)
