"""Learned IMU fusion: causal posture/motion branches with per-timestamp sensor attention."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from tsf.exceptions import ConfigError, DimensionError
from tsf.numerics import functional as F
from tsf.numerics.modules import Conv1d, Linear, Module
from tsf.numerics.tensor import Tensor, as_tensor

IMU_FUSION_MODES = ("adaptive", "conv", "no_attention")


@dataclass
class ImuFusionOutput:
    posture: Tensor  # (..., C, L)
    motion: Tensor  # (..., C, L)
    attn_log: Tensor  # (..., 2, L); row 0 gravity, row 1 gyroscope


class ImuFusionBlock(Module):
    def __init__(self, rng: np.random.Generator, channels: int = 64, gyro_width: int = 10,
                 mode: str = "adaptive"):
        if mode not in IMU_FUSION_MODES:
            raise ConfigError(f"unknown imu fusion mode {mode!r}, expected one of {IMU_FUSION_MODES}")
        self.mode = mode
        self.channels = channels
        grav_width = gyro_width + 1
        if mode == "conv":
            self.cconv_posture = Conv1d(6, channels, grav_width, rng, causal=True)
        else:
            self.cconv_grav = Conv1d(3, channels, grav_width, rng, causal=True)
            self.cconv_gyro = Conv1d(3, channels, gyro_width, rng, causal=True)
        if mode == "adaptive":
            self.attn_proj = Linear(channels, 1, rng)
        self.cconv_lacc = Conv1d(3, channels, grav_width, rng, causal=True)

    def sensor_attention(self, v_grav: Tensor, v_gyro: Tensor) -> Tensor:
        """Softmax over the two posture sensors of tanh(W0 v + b0); returns (..., L, 2)."""
        mu_grav = F.tanh(self.attn_proj(v_grav.swapaxes(-1, -2)))
        mu_gyro = F.tanh(self.attn_proj(v_gyro.swapaxes(-1, -2)))
        return F.softmax(F.concat([mu_grav, mu_gyro], axis=-1), axis=-1)

    def forward(self, grav: Tensor, gyro: Tensor, lacc: Tensor) -> ImuFusionOutput:
        grav, gyro, lacc = as_tensor(grav), as_tensor(gyro), as_tensor(lacc)
        if not grav.shape == gyro.shape == lacc.shape:
            raise DimensionError(f"sensor streams differ in shape: {grav.shape}, {gyro.shape}, {lacc.shape}")
        motion = self.cconv_lacc(lacc)
        length = grav.shape[-1]
        uniform = Tensor(np.full(grav.shape[:-2] + (2, length), 0.5))

        if self.mode == "conv":
            posture = self.cconv_posture(F.concat([grav, gyro], axis=-2))
            return ImuFusionOutput(posture, motion, uniform)

        v_grav = self.cconv_grav(grav)
        v_gyro = self.cconv_gyro(gyro)
        if self.mode == "no_attention":
            return ImuFusionOutput(v_grav + v_gyro, motion, uniform)

        attn = self.sensor_attention(v_grav, v_gyro)
        weight_grav = attn[..., 0:1].swapaxes(-1, -2)
        weight_gyro = attn[..., 1:2].swapaxes(-1, -2)
        posture = v_grav * weight_grav + v_gyro * weight_gyro
        return ImuFusionOutput(posture, motion, attn.swapaxes(-1, -2))


def imu_fusion_forward(grav: Tensor, gyro: Tensor, lacc: Tensor, block: ImuFusionBlock) -> ImuFusionOutput:
    return block(grav, gyro, lacc)
