"""Analytical FLOP accounting for one forward pass.

A multiply-accumulate counts as 2 FLOPs and every bias add as 1. Convolutions,
linear maps, wavelet filtering, attention matmuls and graph propagation are
counted; activations, normalisation and softmax are not.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import singledispatch

import numpy as np

from tsf.model_train.config import TsfConfig
from tsf.model_train.network import TsfModel
from tsf.numerics.modules import Conv1d, Linear
from tsf.temporal_fusion.wavelets import output_length, wavelet_filters

CONVENTION = "1 MAC = 2 FLOPs; +1 per bias add; activations, norms and softmax excluded"


def linear_flops(d_in: int, d_out: int, positions: int = 1, bias: bool = True) -> float:
    return float(2 * d_in * d_out * positions + (d_out * positions if bias else 0))


def conv_flops(c_in: int, c_out: int, width: int, length: int, bias: bool = True) -> float:
    return float(2 * c_in * c_out * width * length + (c_out * length if bias else 0))


def dwt_flops(channels: int, out_length: int, width: int) -> float:
    """Both bands of a single analysis step."""
    return float(2 * 2 * width * channels * out_length)


def attention_flops(d_model: int, length: int, expansion: int = 2) -> float:
    projections = 4 * linear_flops(d_model, d_model, length)
    mixing = 2 * (2 * length * length * d_model)
    feed_forward = linear_flops(d_model, expansion * d_model, length) + linear_flops(expansion * d_model, d_model, length)
    return projections + mixing + feed_forward + 2 * d_model * length  # residual adds


@dataclass
class FlopReport:
    total: float
    layers: dict[str, float] = field(default_factory=dict)
    convention: str = CONVENTION


def flop_breakdown(config: TsfConfig, window: int | None = None) -> FlopReport:
    """Per-layer FLOPs for a single window."""
    length = window or config.window
    imus, nodes = config.imu_count, config.num_nodes
    c0, cp, c = config.cconv_channels, config.projection_channels, config.channels
    gw = config.gyro_kernel
    taps = wavelet_filters().width
    pooled = config.selection_mode == "pool"
    learned_selector = config.selection_mode in ("adaptive", "soft")
    layers: dict[str, float] = {}

    if config.imu_fusion_mode == "conv":
        layers["imu.cconv_posture"] = imus * conv_flops(6, c0, gw + 1, length)
    else:
        layers["imu.cconv_grav"] = imus * conv_flops(3, c0, gw + 1, length)
        layers["imu.cconv_gyro"] = imus * conv_flops(3, c0, gw, length)
        if config.imu_fusion_mode == "adaptive":
            layers["imu.attn_proj"] = imus * 2 * linear_flops(c0, 1, length)
            layers["imu.sensor_weighting"] = imus * 2 * 2 * c0 * length
        else:
            layers["imu.sensor_sum"] = imus * c0 * length
    layers["imu.cconv_lacc"] = imus * conv_flops(3, c0, gw + 1, length)
    layers["projection"] = 2 * imus * conv_flops(c0, cp, 1, length)

    def level(name: str, channels: int, selector_channels: int, size: int, enabled: bool) -> tuple[int, bool]:
        if not enabled:
            return size, False
        half = output_length(size)
        if pooled:
            layers[f"{name}.pool"] = float(2 * channels * half)
            return half, False
        layers[f"{name}.dwt"] = dwt_flops(channels, half, taps)
        if learned_selector:
            layers[f"{name}.selector"] = linear_flops(2 * selector_channels, 2)
        layers[f"{name}.mixing"] = float(2 * 2 * 2 * channels * half)
        return half, True

    l1, has_secondary = level("select_local", nodes * cp, cp, length, config.local_dwt)
    layers["local.conv"] = nodes * conv_flops(cp, c, config.local_kernel, l1)
    if has_secondary:
        layers["local.project"] = nodes * conv_flops(cp, c, 1, l1) + nodes * c * l1

    l2, has_secondary = level("select_graph", nodes * c, c, l1, config.local_dwt)
    if config.graph_mode == "mlp":
        layers["graph.compress"] = linear_flops(nodes * c, c, l2)
    else:
        pairs = nodes * nodes
        if config.graph_mode != "static":
            hidden = max(c // 2, 1)
            layers["graph.edge_mlp"] = l2 * (pairs * c + linear_flops(c, hidden, pairs) + linear_flops(hidden, 1, pairs))
        per_layer = 2 * pairs * c + nodes * c + 2 * nodes * c * c
        layers["graph.aggregation"] = float(l2 * config.graph_layers * per_layer)
        layers["graph.squeeze"] = linear_flops((config.graph_layers + 1) * c, c, nodes * l2)
        layers["graph.node_mean"] = float(l2 * nodes * c)
    if has_secondary:
        layers["graph.secondary"] = float(l2 * nodes * c)

    layers["attention.0"] = attention_flops(c, l2) + c * l2
    l3, has_secondary = level("select_global", c, c, l2, config.global_dwt)
    layers["attention.1"] = attention_flops(c, l3) + (c * l3 if has_secondary else 0)
    for k in range(2, config.attention_layers):
        layers[f"attention.{k}"] = attention_flops(c, l3)
    layers["pool"] = float(c * l3)
    layers["classifier"] = linear_flops(c, config.num_classes)
    return FlopReport(float(sum(layers.values())), layers)


@singledispatch
def count_flops(model, input_shape) -> float:
    """FLOPs of one forward pass of ``model`` on an input of ``input_shape``."""
    raise TypeError(f"no FLOP rule for {type(model).__name__}")


@count_flops.register(Linear)
def _(model: Linear, input_shape) -> float:
    positions = int(np.prod(input_shape[:-1])) if len(input_shape) > 1 else 1
    return linear_flops(model.d_in, model.d_out, positions, model.bias is not None)


@count_flops.register(Conv1d)
def _(model: Conv1d, input_shape) -> float:
    batch = int(np.prod(input_shape[:-2])) if len(input_shape) > 2 else 1
    return batch * conv_flops(model.c_in, model.c_out, model.width, input_shape[-1])


@count_flops.register(TsfConfig)
def _(config: TsfConfig, input_shape) -> float:
    if isinstance(input_shape, (int, np.integer)):
        return flop_breakdown(config, int(input_shape)).total
    batch = input_shape[0] if len(input_shape) == 5 else 1
    return batch * flop_breakdown(config, input_shape[-1]).total


@count_flops.register(TsfModel)
def _(model: TsfModel, input_shape) -> float:
    return count_flops(model.config, input_shape)
