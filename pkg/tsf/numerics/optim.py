from __future__ import annotations

from typing import Iterable

import numpy as np

from tsf.numerics.modules import Parameter


def adam_step(params: Iterable[Parameter], lr: float, beta1: float = 0.9, beta2: float = 0.999,
              eps: float = 1e-8) -> None:
    """One bias-corrected Adam update, in place.

    Parameters without a gradient keep their value, moments and step count.
    """
    for p in params:
        if p.grad is None:
            continue
        grad = p.grad
        state = p.adam_state
        state.step += 1
        state.m *= beta1
        state.m += (1.0 - beta1) * grad
        state.v *= beta2
        state.v += (1.0 - beta2) * grad * grad
        m_hat = state.m / (1.0 - beta1 ** state.step)
        v_hat = state.v / (1.0 - beta2 ** state.step)
        p.data -= lr * m_hat / (np.sqrt(v_hat) + eps)


class Adam:
    def __init__(self, params: Iterable[Parameter], lr: float = 5e-4, beta1: float = 0.9,
                 beta2: float = 0.999, eps: float = 1e-8):
        self.params = list(params)
        self.lr = lr
        self.beta1, self.beta2, self.eps = beta1, beta2, eps

    def step(self) -> None:
        adam_step(self.params, self.lr, self.beta1, self.beta2, self.eps)

    def zero_grad(self) -> None:
        for p in self.params:
            p.grad = None
