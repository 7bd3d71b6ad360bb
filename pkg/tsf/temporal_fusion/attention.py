"""Pre-norm transformer encoder block for global temporal fusion."""
from __future__ import annotations

from functools import lru_cache

import numpy as np

from tsf.exceptions import ConfigError, DimensionError
from tsf.numerics import functional as F
from tsf.numerics.modules import LayerNorm, Linear, Module
from tsf.numerics.tensor import Tensor, as_tensor


@lru_cache(maxsize=32)
def positional_encoding(length: int, d_model: int) -> np.ndarray:
    """Sinusoidal encoding of shape (length, d_model)."""
    position = np.arange(length)[:, None]
    rates = np.exp(-np.log(10000.0) * (np.arange(0, d_model, 2) / d_model))
    encoding = np.zeros((length, d_model))
    encoding[:, 0::2] = np.sin(position * rates)
    encoding[:, 1::2] = np.cos(position * rates[: d_model // 2])
    encoding.setflags(write=False)
    return encoding


class MultiHeadSelfAttention(Module):
    def __init__(self, d_model: int, heads: int, rng: np.random.Generator):
        if d_model % heads:
            raise ConfigError(f"d_model {d_model} is not divisible by {heads} heads")
        self.heads = heads
        self.head_dim = d_model // heads
        self.query = Linear(d_model, d_model, rng)
        self.key = Linear(d_model, d_model, rng)
        self.value = Linear(d_model, d_model, rng)
        self.out = Linear(d_model, d_model, rng)
        self.last_weights: np.ndarray | None = None

    def _split(self, x: Tensor) -> Tensor:
        batch, length, _ = x.shape
        return x.reshape(batch, length, self.heads, self.head_dim).transpose(0, 2, 1, 3)

    def forward(self, x: Tensor) -> Tensor:
        batch, length, d_model = x.shape
        q, k, v = self._split(self.query(x)), self._split(self.key(x)), self._split(self.value(x))
        scores = (q @ k.swapaxes(-1, -2)) * (1.0 / np.sqrt(self.head_dim))
        weights = F.softmax(scores, axis=-1)
        self.last_weights = weights.data
        mixed = (weights @ v).transpose(0, 2, 1, 3).reshape(batch, length, d_model)
        return self.out(mixed)


class AttentionBlock(Module):
    def __init__(self, d_model: int, heads: int, rng: np.random.Generator, expansion: int = 2):
        self.norm_attn = LayerNorm(d_model)
        self.attention = MultiHeadSelfAttention(d_model, heads, rng)
        self.norm_ff = LayerNorm(d_model)
        self.ff_in = Linear(d_model, expansion * d_model, rng)
        self.ff_out = Linear(expansion * d_model, d_model, rng)

    def forward(self, x: Tensor) -> Tensor:
        """x: (B, L, d_model)."""
        x = x + self.attention(self.norm_attn(x))
        return x + self.ff_out(F.relu(self.ff_in(self.norm_ff(x))))


def global_fusion(primary: Tensor, secondary: Tensor | None, block: AttentionBlock,
                  position_encoding: bool = False) -> Tensor:
    """Self-attention over time for (B, C, L) features; the secondary band is added to the output."""
    primary = as_tensor(primary)
    if primary.ndim != 3:
        raise DimensionError(f"global fusion expects (B, C, L), got {primary.shape}")
    if primary.shape[-1] < 1:
        raise DimensionError("global fusion needs at least one timestamp")
    tokens = primary.swapaxes(-1, -2)
    if position_encoding:
        tokens = tokens + Tensor(positional_encoding(tokens.shape[1], tokens.shape[2]))
    out = block(tokens).swapaxes(-1, -2)
    if secondary is not None:
        out = out + secondary
    return out
