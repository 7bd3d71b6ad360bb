"""Classification metrics over the classes present in the ground truth."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from sklearn.metrics import confusion_matrix, precision_recall_fscore_support

from tsf.exceptions import ContractError


@dataclass
class ClassificationScores:
    labels: np.ndarray
    precision: np.ndarray
    recall: np.ndarray
    f1: np.ndarray
    support: np.ndarray
    macro_f1: float
    weighted_f1: float
    accuracy: float
    confusion: np.ndarray  # rows = true class, columns = predicted class
    confusion_labels: np.ndarray  # classes seen in either array, indexing both confusion axes


def score(y_true: np.ndarray, y_pred: np.ndarray) -> ClassificationScores:
    y_true = np.asarray(y_true, dtype=np.int64)
    y_pred = np.asarray(y_pred, dtype=np.int64)
    if y_true.size == 0:
        raise ContractError("cannot score an empty test set")
    if y_true.shape != y_pred.shape:
        raise ContractError(f"label arrays differ in shape: {y_true.shape} vs {y_pred.shape}")
    labels = np.unique(y_true)
    seen = np.union1d(y_true, y_pred)
    precision, recall, f1, support = precision_recall_fscore_support(
        y_true, y_pred, labels=labels, zero_division=0)
    return ClassificationScores(
        labels=labels,
        precision=precision,
        recall=recall,
        f1=f1,
        support=support,
        macro_f1=float(f1.mean()),
        weighted_f1=float((f1 * support).sum() / support.sum()),
        accuracy=float((y_true == y_pred).mean()),
        confusion=confusion_matrix(y_true, y_pred, labels=seen),
        confusion_labels=seen,
    )
