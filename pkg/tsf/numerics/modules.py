"""Parameter containers and the small set of layers the model is built from."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

import numpy as np

from tsf.exceptions import DimensionError, ModelFileError
from tsf.numerics import functional as F
from tsf.numerics.tensor import Tensor


@dataclass
class AdamState:
    m: np.ndarray
    v: np.ndarray
    step: int = 0


class Parameter(Tensor):
    __slots__ = ("name", "adam_state")

    def __init__(self, data, name: str = ""):
        super().__init__(np.array(data, dtype=np.float64), requires_grad=True)
        self.name = name
        self.adam_state = AdamState(np.zeros_like(self.data), np.zeros_like(self.data))

    def __repr__(self) -> str:
        return f"Parameter({self.name!r}, shape={self.shape})"


def he_normal(shape: tuple[int, ...], fan_in: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    """He-normal initialisation: N(0, 2/fan_in)."""
    return rng.normal(0.0, scale * np.sqrt(2.0 / max(fan_in, 1)), size=shape)


class Module:
    training: bool = True

    def __call__(self, *args, **kwargs):
        return self.forward(*args, **kwargs)

    def forward(self, *args, **kwargs):
        raise NotImplementedError

    def named_parameters(self, prefix: str = "") -> Iterator[tuple[str, Parameter]]:
        for key, value in vars(self).items():
            path = f"{prefix}{key}"
            if isinstance(value, Parameter):
                yield path, value
            elif isinstance(value, Module):
                yield from value.named_parameters(path + ".")
            elif isinstance(value, (list, tuple)):
                for index, item in enumerate(value):
                    if isinstance(item, Module):
                        yield from item.named_parameters(f"{path}.{index}.")
                    elif isinstance(item, Parameter):
                        yield f"{path}.{index}", item

    def parameters(self) -> list[Parameter]:
        return [p for _, p in self.named_parameters()]

    def modules(self) -> Iterator["Module"]:
        yield self
        for value in vars(self).values():
            if isinstance(value, Module):
                yield from value.modules()
            elif isinstance(value, (list, tuple)):
                for item in value:
                    if isinstance(item, Module):
                        yield from item.modules()

    def zero_grad(self) -> None:
        for p in self.parameters():
            p.grad = None

    def train(self, mode: bool = True) -> "Module":
        for module in self.modules():
            module.training = mode
        return self

    def eval(self) -> "Module":
        return self.train(False)

    def state_dict(self) -> dict[str, np.ndarray]:
        return {name: p.data.copy() for name, p in self.named_parameters()}

    def load_state_dict(self, state: dict[str, np.ndarray]) -> None:
        own = dict(self.named_parameters())
        missing = sorted(set(own) - set(state))
        unexpected = sorted(set(state) - set(own))
        if missing or unexpected:
            raise ModelFileError(f"parameter names differ: missing={missing[:5]} unexpected={unexpected[:5]}")
        for name, p in own.items():
            value = np.asarray(state[name], dtype=np.float64)
            if value.shape != p.shape:
                raise ModelFileError(f"{name}: stored shape {value.shape} != model shape {p.shape}")
            p.data[...] = value

    def num_parameters(self) -> int:
        return sum(p.size for p in self.parameters())


class Linear(Module):
    def __init__(self, d_in: int, d_out: int, rng: np.random.Generator, bias: bool = True, init_scale: float = 1.0):
        self.d_in, self.d_out = d_in, d_out
        self.weight = Parameter(he_normal((d_out, d_in), d_in, rng, init_scale))
        self.bias = Parameter(np.zeros(d_out)) if bias else None

    def forward(self, x: Tensor) -> Tensor:
        return F.linear(x, self.weight, self.bias)


class Conv1d(Module):
    """1-D convolution over (…, C_in, L); ``causal`` pads W-1 on the left, otherwise symmetric."""

    def __init__(self, c_in: int, c_out: int, width: int, rng: np.random.Generator, causal: bool = False):
        if width < 1:
            raise DimensionError(f"kernel width must be >= 1, got {width}")
        self.c_in, self.c_out, self.width, self.causal = c_in, c_out, width, causal
        self.weight = Parameter(he_normal((c_out, c_in, width), c_in * width, rng))
        self.bias = Parameter(np.zeros(c_out))

    def forward(self, x: Tensor) -> Tensor:
        if self.causal:
            return F.causal_conv1d(x, self.weight, self.bias)
        return F.same_conv1d(x, self.weight, self.bias)


class LayerNorm(Module):
    def __init__(self, features: int):
        self.gain = Parameter(np.ones(features))
        self.shift = Parameter(np.zeros(features))

    def forward(self, x: Tensor) -> Tensor:
        return F.layer_norm(x, self.gain, self.shift)
