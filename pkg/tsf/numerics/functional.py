"""Neural primitives built on :mod:`tsf.numerics.tensor`."""
from __future__ import annotations

import numpy as np
from numpy.lib.stride_tricks import sliding_window_view

from tsf.exceptions import DimensionError
from tsf.numerics.tensor import (
    Tensor, _record, absolute, as_tensor, concat, detach, exp, log, reduce_mean, relu, stack, tanh,
)

__all__ = [
    "linear", "conv1d", "causal_conv1d", "same_conv1d", "softmax", "log_softmax", "layer_norm",
    "mean_pool", "tanh", "relu", "exp", "log", "absolute", "concat", "stack", "detach",
]


def linear(x: Tensor, weight: Tensor, bias: Tensor | None = None) -> Tensor:
    x, weight = as_tensor(x), as_tensor(weight)
    if x.shape[-1] != weight.shape[1]:
        raise DimensionError(f"linear expects trailing dim {weight.shape[1]}, got input {x.shape}")
    out = x @ weight.T
    if bias is not None:
        out = out + bias
    return out


def conv1d(x: Tensor, kernel: Tensor, bias: Tensor | None, pad_left: int, pad_right: int) -> Tensor:
    """Cross-correlate ``x`` (…, C_in, L) with ``kernel`` (C_out, C_in, W) along the last axis.

    The input is zero-padded by ``pad_left``/``pad_right`` samples; output
    position ``t`` sees padded samples ``t .. t+W-1``.
    """
    x, kernel = as_tensor(x), as_tensor(kernel)
    if x.ndim < 2:
        raise DimensionError(f"conv1d input needs (…, C_in, L), got {x.shape}")
    c_out, c_in, width = kernel.shape
    if x.shape[-2] != c_in:
        raise DimensionError(f"kernel expects {c_in} input channels, input has {x.shape[-2]}")
    if x.shape[-1] < 1 or width < 1:
        raise DimensionError(f"conv1d needs L >= 1 and W >= 1, got L={x.shape[-1]} W={width}")

    lead = x.shape[:-2]
    length = x.shape[-1]
    xb = x.data.reshape((-1, c_in, length))
    batch = xb.shape[0]
    xp = np.pad(xb, ((0, 0), (0, 0), (pad_left, pad_right)))
    l_out = xp.shape[-1] - width + 1
    if l_out < 1:
        raise DimensionError(f"kernel width {width} exceeds padded length {xp.shape[-1]}")

    # (B, C_in, L_out, W) -> (B, L_out, C_in*W)
    cols = sliding_window_view(xp, width, axis=-1).transpose(0, 2, 1, 3).reshape(batch, l_out, c_in * width)
    kmat = kernel.data.reshape(c_out, c_in * width)
    out = (cols @ kmat.T).transpose(0, 2, 1)
    if bias is not None:
        out = out + as_tensor(bias).data[:, None]
    parents = (x, kernel) if bias is None else (x, kernel, as_tensor(bias))

    def backward_fn(g):
        gb = g.reshape(batch, c_out, l_out)
        gt = gb.transpose(0, 2, 1)
        grad_kernel = (gt.reshape(-1, c_out).T @ cols.reshape(-1, c_in * width)).reshape(kernel.shape)
        grad_x = None
        if x.requires_grad:
            gcols = (gt @ kmat).reshape(batch, l_out, c_in, width)
            gxp = np.zeros_like(xp)
            for w in range(width):
                gxp[:, :, w:w + l_out] += gcols[:, :, :, w].transpose(0, 2, 1)
            grad_x = gxp[:, :, pad_left:pad_left + length].reshape(x.shape)
        grads = [grad_x, grad_kernel]
        if bias is not None:
            grads.append(gb.sum(axis=(0, 2)))
        return grads

    return _record(np.ascontiguousarray(out).reshape(lead + (c_out, l_out)), parents, backward_fn)


def causal_conv1d(x: Tensor, kernel: Tensor, bias: Tensor | None = None) -> Tensor:
    """Length-preserving causal convolution: output[t] depends on input[t-W+1 .. t] only."""
    return conv1d(x, kernel, bias, kernel.shape[-1] - 1, 0)


def same_conv1d(x: Tensor, kernel: Tensor, bias: Tensor | None = None) -> Tensor:
    width = kernel.shape[-1]
    return conv1d(x, kernel, bias, (width - 1) // 2, width // 2)


def softmax(x: Tensor, axis: int = -1) -> Tensor:
    x = as_tensor(x)
    if x.shape[axis] == 0:
        raise DimensionError(f"softmax over empty axis {axis} of shape {x.shape}")
    shifted = x.data - x.data.max(axis=axis, keepdims=True)
    e = np.exp(shifted)
    out = e / e.sum(axis=axis, keepdims=True)
    return _record(out, (x,), lambda g: (out * (g - (g * out).sum(axis=axis, keepdims=True)),))


def log_softmax(x: Tensor, axis: int = -1) -> Tensor:
    x = as_tensor(x)
    if x.shape[axis] == 0:
        raise DimensionError(f"log_softmax over empty axis {axis} of shape {x.shape}")
    shifted = x.data - x.data.max(axis=axis, keepdims=True)
    out = shifted - np.log(np.exp(shifted).sum(axis=axis, keepdims=True))
    probs = np.exp(out)
    return _record(out, (x,), lambda g: (g - probs * g.sum(axis=axis, keepdims=True),))


def layer_norm(x: Tensor, gain: Tensor | None = None, shift: Tensor | None = None, eps: float = 1e-5) -> Tensor:
    """Normalize over the trailing axis, then apply the per-feature affine map."""
    x = as_tensor(x)
    if x.shape[-1] == 0:
        raise DimensionError("layer_norm over an empty feature axis")
    centered = x - x.mean(axis=-1, keepdims=True)
    var = (centered * centered).mean(axis=-1, keepdims=True)
    out = centered / (var + eps) ** 0.5
    if gain is not None:
        out = out * gain
    if shift is not None:
        out = out + shift
    return out


def mean_pool(x: Tensor, axis: int = -1) -> Tensor:
    return reduce_mean(as_tensor(x), axis)
