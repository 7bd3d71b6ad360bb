"""Model and training hyperparameters.

Config files are flat ``KEY=value`` text; keys are the upper- or lower-case
field names of :class:`TsfConfig` and every key is optional.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass
from pathlib import Path

from marshmallow import RAISE, Schema, ValidationError, fields, post_load, validate, validates_schema

from tsf.exceptions import ConfigError
from tsf.graph_fusion.block import GRAPH_MODES
from tsf.imu_fusion.block import IMU_FUSION_MODES
from tsf.temporal_fusion.pipeline import MIN_LENGTH
from tsf.temporal_fusion.selection import SELECTION_MODES
from tsf.utils.env_files import read_env_file, write_env_file


@dataclass(frozen=True)
class TsfConfig:
    # data shape
    imu_count: int = 1
    num_classes: int = 6
    window: int = 128
    # architecture
    cconv_channels: int = 64
    gyro_kernel: int = 10
    projection_channels: int = 96
    channels: int = 128
    local_kernel: int = 5
    graph_layers: int = 2
    attention_layers: int = 2
    heads: int = 4
    # ablation switches
    imu_fusion_mode: str = "adaptive"
    graph_mode: str = "adaptive"
    selection_mode: str = "adaptive"
    local_dwt: bool = True
    global_dwt: bool = True
    # training protocol
    lr: float = 0.0005
    lr_halving_epochs: int = 5
    epochs: int = 30
    batch_size: int = 128
    mixup_alpha: float = 0.2
    tau_start: float = 1.0
    tau_end: float = 0.5
    val_fraction: float = 0.1
    seed: int = 0
    # cross-validation
    runs: int = 3
    folds: int = 10

    @property
    def num_nodes(self) -> int:
        return 2 * self.imu_count

    def replace(self, **changes) -> "TsfConfig":
        return config_from_dict({**asdict(self), **changes})

    def as_dict(self) -> dict:
        return TsfConfigSchema().dump(self)


_positive = validate.Range(min=1)


class TsfConfigSchema(Schema):
    class Meta:
        unknown = RAISE

    imu_count = fields.Int(load_default=1, validate=_positive)
    num_classes = fields.Int(load_default=6, validate=validate.Range(min=2))
    window = fields.Int(load_default=128, validate=validate.Range(min=MIN_LENGTH))
    cconv_channels = fields.Int(load_default=64, validate=_positive)
    gyro_kernel = fields.Int(load_default=10, validate=_positive)
    projection_channels = fields.Int(load_default=96, validate=_positive)
    channels = fields.Int(load_default=128, validate=validate.Range(min=2))
    local_kernel = fields.Int(load_default=5, validate=_positive)
    graph_layers = fields.Int(load_default=2, validate=_positive)
    attention_layers = fields.Int(load_default=2, validate=validate.Range(min=2))
    heads = fields.Int(load_default=4, validate=_positive)
    imu_fusion_mode = fields.Str(load_default="adaptive", validate=validate.OneOf(IMU_FUSION_MODES))
    graph_mode = fields.Str(load_default="adaptive", validate=validate.OneOf(GRAPH_MODES))
    selection_mode = fields.Str(load_default="adaptive", validate=validate.OneOf(SELECTION_MODES))
    local_dwt = fields.Bool(load_default=True)
    global_dwt = fields.Bool(load_default=True)
    lr = fields.Float(load_default=0.0005, validate=validate.Range(min=0, min_inclusive=False))
    lr_halving_epochs = fields.Int(load_default=5, validate=_positive)
    epochs = fields.Int(load_default=30, validate=_positive)
    batch_size = fields.Int(load_default=128, validate=_positive)
    mixup_alpha = fields.Float(load_default=0.2, validate=validate.Range(min=0))
    tau_start = fields.Float(load_default=1.0, validate=validate.Range(min=0, min_inclusive=False))
    tau_end = fields.Float(load_default=0.5, validate=validate.Range(min=0, min_inclusive=False))
    val_fraction = fields.Float(load_default=0.1, validate=validate.Range(min=0, max=1, max_inclusive=False))
    seed = fields.Int(load_default=0)
    runs = fields.Int(load_default=3, validate=_positive)
    folds = fields.Int(load_default=10, validate=validate.Range(min=2))

    @validates_schema
    def check_heads(self, data, **kwargs):
        if data["channels"] % data["heads"]:
            raise ValidationError(f"channels ({data['channels']}) must be divisible by heads ({data['heads']})",
                                  "heads")

    @post_load
    def make_config(self, data, **kwargs):
        return TsfConfig(**data)


def config_from_dict(values: dict) -> TsfConfig:
    try:
        return TsfConfigSchema().load({key.lower(): value for key, value in values.items()})
    except ValidationError as exc:
        raise ConfigError(str(exc.messages)) from exc


def load_config(path: str | Path) -> TsfConfig:
    return read_env_file(path, TsfConfigSchema())


def dump_config(config: TsfConfig, path: str | Path) -> Path:
    return write_env_file(path, TsfConfigSchema(), config)
