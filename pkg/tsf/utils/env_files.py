"""Flat ``KEY=value`` files (dotenv syntax) validated by marshmallow schemas."""
from __future__ import annotations

from pathlib import Path

from dotenv import dotenv_values
from marshmallow import Schema, ValidationError, fields

from tsf.exceptions import ConfigError


class CommaList(fields.Field):
    """A list of strings written as ``a,b,c``."""

    def _serialize(self, value, attr, obj, **kwargs):
        return None if value is None else ",".join(str(v) for v in value)

    def _deserialize(self, value, attr, data, **kwargs):
        if isinstance(value, (list, tuple)):
            return [str(v) for v in value]
        if not isinstance(value, str):
            raise ValidationError("Expected a comma separated string.")
        return [part.strip() for part in value.split(",") if part.strip()]


def read_env_file(path: str | Path, schema: Schema) -> dict:
    path = Path(path)
    if not path.is_file():
        raise ConfigError(f"config file not found: {path}")
    raw = dotenv_values(path)
    empty = [key for key, value in raw.items() if value is None]
    if empty:
        raise ConfigError(f"{path}: keys without a value: {', '.join(empty)}")
    try:
        return schema.load({key.lower(): value for key, value in raw.items()})
    except ValidationError as exc:
        raise ConfigError(f"{path}: {exc.messages}") from exc


def _format(value) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def write_env_file(path: str | Path, schema: Schema, obj) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    dumped = schema.dump(obj)
    lines = [f"{key.upper()}={_format(value)}" for key, value in dumped.items() if value is not None]
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path
