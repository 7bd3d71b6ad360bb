from __future__ import annotations

import logging
import time
from dataclasses import dataclass, field

import numpy as np
from sklearn.model_selection import train_test_split

from tsf.datapipe.types import WindowSet
from tsf.exceptions import ContractError
from tsf.model_train.config import TsfConfig
from tsf.model_train.flops import count_flops
from tsf.model_train.losses import cross_entropy, mixup, one_hot
from tsf.model_train.metrics import ClassificationScores, score
from tsf.model_train.network import TsfModel, predict
from tsf.numerics.optim import adam_step


def lr_at(epoch: int, config: TsfConfig) -> float:
    """Learning rate for a 0-based epoch: halved every ``lr_halving_epochs`` epochs."""
    return config.lr * 0.5 ** (epoch // config.lr_halving_epochs)


def tau_at(epoch: int, config: TsfConfig) -> float:
    """Gumbel temperature, linear from ``tau_start`` at the first epoch to ``tau_end`` at the last."""
    if config.epochs <= 1:
        return config.tau_start
    return config.tau_start + (config.tau_end - config.tau_start) * epoch / (config.epochs - 1)


@dataclass
class EpochRecord:
    epoch: int
    loss: float
    train_accuracy: float
    val_accuracy: float
    lr: float
    tau: float


@dataclass
class DataSplits:
    train: WindowSet
    val: WindowSet | None = None
    test: WindowSet | None = None


@dataclass
class FoldResult:
    fold_id: str
    scores: ClassificationScores
    curve: list[EpochRecord] = field(default_factory=list)
    flops: float = 0.0
    runtime_s: float = 0.0
    best_epoch: int = -1
    test_subjects: list[int] = field(default_factory=list)

    @property
    def macro_f1(self) -> float:
        return self.scores.macro_f1

    @property
    def weighted_f1(self) -> float:
        return self.scores.weighted_f1


def split_validation(windows: WindowSet, fraction: float, seed: int) -> tuple[WindowSet, WindowSet | None]:
    """Hold out ``fraction`` of the windows, stratified by class when every class has two members."""
    if fraction <= 0 or len(windows) < 2:
        return windows, None
    index = np.arange(len(windows))
    try:
        train_idx, val_idx = train_test_split(index, test_size=fraction, random_state=seed,
                                              stratify=windows.labels)
    except ValueError:
        logging.getLogger(__name__).warning("Stratified validation split impossible; falling back to a random one")
        train_idx, val_idx = train_test_split(index, test_size=fraction, random_state=seed)
    return windows.subset(np.sort(train_idx)), windows.subset(np.sort(val_idx))


class Trainer:
    def __init__(self, config: TsfConfig, model: TsfModel | None = None):
        self.logger = logging.getLogger(__name__)
        self.config = config
        init_seq, shuffle_seq, mixup_seq, gumbel_seq = np.random.SeedSequence(config.seed).spawn(4)
        self.model = model if model is not None else TsfModel(config, np.random.default_rng(init_seq))
        self.shuffle_rng = np.random.default_rng(shuffle_seq)
        self.mixup_rng = np.random.default_rng(mixup_seq)
        self.gumbel_rng = np.random.default_rng(gumbel_seq)
        self.best_epoch = -1

    # -----------------------------
    # Single steps
    # -----------------------------

    def train_step(self, x: np.ndarray, targets: np.ndarray, lr: float) -> tuple[float, np.ndarray]:
        """One Adam step on a batch with soft targets; returns (loss, predicted classes)."""
        model = self.model
        model.train()
        model.zero_grad()
        result = model(x, self.gumbel_rng)
        loss = cross_entropy(result.logits, targets)
        loss.backward()
        adam_step(model.parameters(), lr)
        return loss.item(), result.logits.data.argmax(axis=-1)

    def accuracy(self, windows: WindowSet) -> float:
        predictions, _ = predict(self.model, windows, self.config.batch_size)
        return float((predictions == windows.labels).mean())

    # -----------------------------
    # Epoch loop
    # -----------------------------

    def fit(self, train: WindowSet, val: WindowSet | None = None) -> list[EpochRecord]:
        if len(train) == 0:
            raise ContractError("training split is empty")
        if val is not None and len(val) == 0:
            raise ContractError("validation split is empty")
        config = self.config
        curve: list[EpochRecord] = []
        best_accuracy, best_state = -1.0, None
        for epoch in range(config.epochs):
            lr, tau = lr_at(epoch, config), tau_at(epoch, config)
            self.model.set_temperature(tau)
            order = self.shuffle_rng.permutation(len(train))
            losses, hits = [], 0
            for start in range(0, len(train), config.batch_size):
                index = order[start:start + config.batch_size]
                x = train.data[index]
                labels = train.labels[index]
                targets = one_hot(labels, config.num_classes)
                if config.mixup_alpha > 0:
                    x, targets = mixup(x, targets, config.mixup_alpha, self.mixup_rng)
                loss, predicted = self.train_step(x, targets, lr)
                losses.append(loss * len(index))
                hits += int((predicted == labels).sum())
            train_accuracy = hits / len(train)
            val_accuracy = self.accuracy(val) if val is not None else train_accuracy
            record = EpochRecord(epoch, float(np.sum(losses) / len(train)), train_accuracy, val_accuracy, lr, tau)
            curve.append(record)
            self.logger.info("epoch %s/%s loss=%.4f train_acc=%.3f val_acc=%.3f lr=%.2e tau=%.3f",
                             epoch + 1, config.epochs, record.loss, train_accuracy, val_accuracy, lr, tau)
            if val_accuracy > best_accuracy:
                best_accuracy, best_state = val_accuracy, self.model.state_dict()
                self.best_epoch = epoch
        self.model.load_state_dict(best_state)
        return curve

    def evaluate(self, test: WindowSet, fold_id: str = "test") -> FoldResult:
        return evaluate(self.model, test, fold_id)


def evaluate(model: TsfModel, test: WindowSet, fold_id: str = "test") -> FoldResult:
    if len(test) == 0:
        raise ContractError("test split is empty")
    predictions, _ = predict(model, test)
    return FoldResult(
        fold_id=fold_id,
        scores=score(test.labels, predictions),
        flops=count_flops(model.config, test.window),
        test_subjects=sorted(int(s) for s in np.unique(test.subjects)),
    )


def train(splits: DataSplits, config: TsfConfig, fold_id: str = "fold") -> tuple[TsfModel, FoldResult]:
    """Fit on ``splits.train`` with a best-validation checkpoint and score on the test split."""
    started = time.perf_counter()
    train_set, val_set = splits.train, splits.val
    if val_set is None:
        train_set, val_set = split_validation(train_set, config.val_fraction, config.seed)
    trainer = Trainer(config)
    curve = trainer.fit(train_set, val_set)
    test_set = splits.test if splits.test is not None else (val_set if val_set is not None else train_set)
    result = trainer.evaluate(test_set, fold_id)
    result.curve = curve
    result.best_epoch = trainer.best_epoch
    result.runtime_s = time.perf_counter() - started
    return trainer.model, result
