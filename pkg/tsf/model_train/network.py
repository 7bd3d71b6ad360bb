"""Full model: IMU fusion, per-node projection, temporal pipeline and classifier."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from tsf.datapipe.types import WindowSet
from tsf.exceptions import ConfigError, DimensionError
from tsf.imu_fusion.block import ImuFusionBlock
from tsf.model_train.config import TsfConfig
from tsf.numerics import functional as F
from tsf.numerics.modules import Conv1d, Linear, Module
from tsf.numerics.tensor import Tensor, as_tensor, no_grad
from tsf.temporal_fusion.pipeline import TemporalPipeline
from tsf.temporal_fusion.selection import WaveletRoute

# keeps the initial logits near zero so the first loss is close to ln(classes)
CLASSIFIER_INIT_SCALE = 0.01
FORWARD_MODES = ("train", "infer")


@dataclass
class Diagnostics:
    attention: np.ndarray  # (B, P, 2, L) posture-sensor weights, gravity then gyroscope
    adjacency: np.ndarray | None  # (B, L/4, N, N)
    routes: list[WaveletRoute]
    soft_masks: list[np.ndarray] = field(default_factory=list)  # one (B, 2) per selection level
    lengths: tuple[int, ...] = ()


@dataclass
class ForwardResult:
    logits: Tensor
    diagnostics: Diagnostics


class TsfModel(Module):
    def __init__(self, config: TsfConfig, rng: np.random.Generator | None = None):
        self.config = config
        rng = rng if rng is not None else np.random.default_rng(config.seed)
        self.imu = ImuFusionBlock(rng, config.cconv_channels, config.gyro_kernel, config.imu_fusion_mode)
        self.posture_proj = Conv1d(config.cconv_channels, config.projection_channels, 1, rng)
        self.motion_proj = Conv1d(config.cconv_channels, config.projection_channels, 1, rng)
        self.temporal = TemporalPipeline(
            rng,
            num_nodes=config.num_nodes,
            in_channels=config.projection_channels,
            channels=config.channels,
            local_width=config.local_kernel,
            graph_layers=config.graph_layers,
            graph_mode=config.graph_mode,
            attention_layers=config.attention_layers,
            heads=config.heads,
            selection_mode=config.selection_mode,
            local_dwt=config.local_dwt,
            global_dwt=config.global_dwt,
        )
        self.classifier = Linear(config.channels, config.num_classes, rng, init_scale=CLASSIFIER_INIT_SCALE)

    def set_temperature(self, tau: float) -> None:
        self.temporal.set_temperature(tau)

    def forward(self, x, rng: np.random.Generator | None = None) -> ForwardResult:
        x = as_tensor(x)
        if x.ndim != 5 or x.shape[2:4] != (3, 3):
            raise DimensionError(f"model input must be (B, P, 3, 3, L), got {x.shape}")
        batch, imus, _, _, length = x.shape
        if imus != self.config.imu_count:
            raise ConfigError(f"model was built for {self.config.imu_count} IMUs, batch has {imus}")
        flat = x.reshape(batch * imus, 3, 3, length)
        fused = self.imu(flat[:, 0], flat[:, 1], flat[:, 2])

        proj = self.config.projection_channels
        posture = self.posture_proj(fused.posture).reshape(batch, imus, 1, proj, length)
        motion = self.motion_proj(fused.motion).reshape(batch, imus, 1, proj, length)
        # node 2p is the posture of IMU p, node 2p + 1 its motion
        nodes = F.concat([posture, motion], axis=2).reshape(batch, 2 * imus, proj, length)

        temporal = self.temporal(nodes, rng)
        logits = self.classifier(temporal.pooled)
        adjacency = temporal.graph.adjacency if temporal.graph is not None else None
        diagnostics = Diagnostics(
            attention=fused.attn_log.data.reshape(batch, imus, 2, length),
            adjacency=None if adjacency is None else adjacency.data,
            routes=temporal.routes,
            soft_masks=[s.soft for s in temporal.selections],
            lengths=temporal.lengths,
        )
        return ForwardResult(logits, diagnostics)


def tsf_forward(batch, model: TsfModel, rng: np.random.Generator | None = None,
                mode: str = "infer") -> ForwardResult:
    """Forward a batch in ``train`` mode (noisy selection, recorded ops) or ``infer`` mode (deterministic)."""
    if mode not in FORWARD_MODES:
        raise ConfigError(f"unknown forward mode {mode!r}, expected one of {FORWARD_MODES}")
    data = batch.data if isinstance(batch, WindowSet) else batch
    if mode == "train":
        model.train()
        return model(data, rng)
    model.eval()
    with no_grad():
        return model(data, None)


def predict(model: TsfModel, windows: WindowSet, batch_size: int = 256) -> tuple[np.ndarray, list[Diagnostics]]:
    """Class predictions for every window plus the per-batch diagnostics."""
    predictions, diagnostics = [], []
    for start in range(0, len(windows), batch_size):
        result = tsf_forward(windows.data[start:start + batch_size], model, mode="infer")
        predictions.append(result.logits.data.argmax(axis=-1))
        diagnostics.append(result.diagnostics)
    return np.concatenate(predictions), diagnostics
