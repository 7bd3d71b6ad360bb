from __future__ import annotations

import numpy as np

from tsf.exceptions import ConfigError, DimensionError
from tsf.numerics import functional as F
from tsf.numerics.tensor import Tensor, as_tensor


def one_hot(labels: np.ndarray, num_classes: int) -> np.ndarray:
    labels = np.asarray(labels, dtype=np.int64)
    if labels.size and (labels.min() < 0 or labels.max() >= num_classes):
        raise DimensionError(f"labels must lie in [0, {num_classes}), got range [{labels.min()}, {labels.max()}]")
    return np.eye(num_classes)[labels]


def cross_entropy(logits: Tensor, targets: np.ndarray) -> Tensor:
    """Mean cross-entropy against soft (row-stochastic) targets."""
    logits = as_tensor(logits)
    targets = np.asarray(targets, dtype=np.float64)
    if logits.shape != targets.shape:
        raise DimensionError(f"logits {logits.shape} and targets {targets.shape} differ in shape")
    return -(F.log_softmax(logits, axis=-1) * targets).sum(axis=-1).mean()


def mixup(batch_x: np.ndarray, batch_y: np.ndarray, alpha: float, rng: np.random.Generator,
          lam: float | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Convex combination of every sample with a random partner; labels are mixed the same way."""
    if alpha <= 0:
        raise ConfigError(f"mixup alpha must be positive, got {alpha}")
    lam = rng.beta(alpha, alpha) if lam is None else float(lam)
    order = rng.permutation(len(batch_x))
    mixed_x = lam * batch_x + (1.0 - lam) * batch_x[order]
    mixed_y = lam * batch_y + (1.0 - lam) * batch_y[order]
    return mixed_x, mixed_y
