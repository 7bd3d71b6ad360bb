"""Per-sample choice between the low and the high wavelet band.

During training the choice is a Gumbel-softmax sample: the forward pass uses
the hard one-hot mask while gradients flow through the soft mask. At inference
the choice is the argmax of the logits without noise.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from tsf.exceptions import ConfigError, DimensionError
from tsf.numerics import functional as F
from tsf.numerics.modules import Linear, Module
from tsf.numerics.tensor import Tensor, _record, as_tensor

SELECTION_MODES = ("adaptive", "soft", "low", "high", "pool")
GUMBEL_EPS = 1e-20
ROUTE_SYMBOLS = {0: "L", 1: "H"}


@dataclass(frozen=True)
class WaveletRoute:
    """Band chosen at each decomposition level for one sample."""

    selections: tuple[str, ...]

    def __str__(self) -> str:
        return "".join(self.selections)

    @classmethod
    def from_bits(cls, bits) -> "WaveletRoute":
        return cls(tuple(ROUTE_SYMBOLS[int(b)] for b in bits))


@dataclass
class SelectionResult:
    primary: Tensor
    secondary: Tensor | None
    mask: Tensor | None  # (B, 2), exactly one-hot unless the soft mode is training
    soft: np.ndarray | None  # (B, 2)
    route_bits: np.ndarray | None  # (B,), 0 = low band, 1 = high band


def sample_gumbel(shape: tuple[int, ...], rng: np.random.Generator) -> np.ndarray:
    u = rng.random(shape)
    return -np.log(-np.log(u + GUMBEL_EPS) + GUMBEL_EPS)


def gumbel_softmax(logits: Tensor, tau: float, rng: np.random.Generator | None = None) -> Tensor:
    """softmax((logits + G) / tau) with G ~ Gumbel(0, 1); no noise when ``rng`` is None."""
    logits = as_tensor(logits)
    if tau <= 0:
        raise ConfigError(f"temperature must be positive, got {tau}")
    if rng is not None:
        logits = logits + sample_gumbel(logits.shape, rng)
    return F.softmax(logits * (1.0 / tau), axis=-1)


def one_hot_argmax(values: np.ndarray) -> np.ndarray:
    hard = np.zeros_like(values)
    np.put_along_axis(hard, values.argmax(axis=-1)[..., None], 1.0, axis=-1)
    return hard


def straight_through(soft: Tensor) -> Tensor:
    """Forward value is the one-hot argmax of ``soft``; the gradient passes to ``soft`` unchanged."""
    return _record(one_hot_argmax(soft.data), (soft,), lambda g: (g,))


class FrequencySelector(Module):
    def __init__(self, channels: int, rng: np.random.Generator, mode: str = "adaptive"):
        if mode not in SELECTION_MODES:
            raise ConfigError(f"unknown selection mode {mode!r}, expected one of {SELECTION_MODES}")
        self.mode = mode
        self.channels = channels
        self.tau = 1.0
        if mode in ("adaptive", "soft"):
            self.squeeze = Linear(2 * channels, 2, rng)

    def logits(self, low: Tensor, high: Tensor) -> Tensor:
        """Band descriptors are means over every axis but batch and channel (axis -2)."""
        axes = tuple(a for a in range(1, low.ndim) if a != low.ndim - 2)
        descriptor = F.concat([low.mean(axis=axes), high.mean(axis=axes)], axis=-1)
        return self.squeeze(descriptor)

    def mask(self, low: Tensor, high: Tensor, rng: np.random.Generator | None) -> tuple[Tensor, np.ndarray]:
        batch = low.shape[0]
        if self.mode in ("low", "high"):
            fixed = np.zeros((batch, 2))
            fixed[:, 0 if self.mode == "low" else 1] = 1.0
            return Tensor(fixed), fixed
        logits = self.logits(low, high)
        if not self.training:
            soft = F.softmax(logits * (1.0 / self.tau), axis=-1)
            return Tensor(one_hot_argmax(logits.data)), soft.data
        soft = gumbel_softmax(logits, self.tau, rng)
        if self.mode == "soft":
            return soft, soft.data
        return straight_through(soft), soft.data


def select_frequency(low: Tensor, high: Tensor, selector: FrequencySelector,
                     rng: np.random.Generator | None = None) -> SelectionResult:
    low, high = as_tensor(low), as_tensor(high)
    if low.shape != high.shape:
        raise DimensionError(f"band shapes differ: {low.shape} vs {high.shape}")
    mask, soft = selector.mask(low, high, rng)
    broadcast = (low.shape[0],) + (1,) * (low.ndim - 1)
    keep_low = mask[:, 0].reshape(broadcast)
    keep_high = mask[:, 1].reshape(broadcast)
    primary = low * keep_low + high * keep_high
    secondary = low * keep_high + high * keep_low
    return SelectionResult(primary, secondary, mask, soft, mask.data.argmax(axis=-1))
