from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

from marshmallow import Schema, ValidationError, fields, post_load, validate, validates_schema

from tsf.utils.env_files import CommaList, read_env_file, write_env_file


@dataclass
class DatasetManifest:
    """Dataset-level constants declared next to the CSV file."""

    sample_rate_hz: float
    window: int
    overlap: int
    num_classes: int | None = None
    imu_count: int | None = None
    class_names: list[str] = field(default_factory=list)


class ManifestSchema(Schema):
    sample_rate_hz = fields.Float(required=True, validate=validate.Range(min=0, min_inclusive=False))
    window = fields.Int(required=True, validate=validate.Range(min=1))
    overlap = fields.Int(load_default=0, validate=validate.Range(min=0))
    num_classes = fields.Int(load_default=None, allow_none=True, validate=validate.Range(min=1))
    imu_count = fields.Int(load_default=None, allow_none=True, validate=validate.Range(min=1))
    class_names = CommaList(load_default=list)

    @validates_schema
    def check_overlap(self, data, **kwargs):
        if data.get("overlap", 0) >= data["window"]:
            raise ValidationError("overlap must be smaller than window", "overlap")

    @post_load
    def make_manifest(self, data, **kwargs):
        return DatasetManifest(**data)


def load_manifest(path: str | Path) -> DatasetManifest:
    return read_env_file(path, ManifestSchema())


def dump_manifest(manifest: DatasetManifest, path: str | Path) -> Path:
    return write_env_file(path, ManifestSchema(), manifest)
