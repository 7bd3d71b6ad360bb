import json
import logging
from pathlib import Path

import numpy as np
import pandas as pd

from tsf.datapipe.csv_io import FLOAT_FORMAT
from tsf.datapipe.types import WindowSet
from tsf.exceptions import ModelFileError
from tsf.model_train.config import TsfConfigSchema, config_from_dict
from tsf.model_train.network import TsfModel

CONFIG_KEY = "__config__"


def save_model(model: TsfModel, path) -> Path:
    """Named parameters plus the serialized config in one ``.npz`` archive."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    arrays = dict(model.state_dict())
    arrays[CONFIG_KEY] = np.array(TsfConfigSchema().dumps(model.config))
    with path.open("wb") as fh:
        np.savez(fh, **arrays)
    return path


def load_model(path) -> TsfModel:
    path = Path(path)
    if not path.is_file():
        raise ModelFileError(f"model file not found: {path}")
    try:
        with np.load(path, allow_pickle=False) as archive:
            config = config_from_dict(json.loads(str(archive[CONFIG_KEY])))
            state = {key: archive[key] for key in archive.files if key != CONFIG_KEY}
    except (KeyError, ValueError, OSError) as exc:
        raise ModelFileError(f"{path}: not a model archive ({exc})") from exc
    model = TsfModel(config)
    model.load_state_dict(state)
    return model


class RunStore:
    """Output directory of one CLI invocation."""

    def __init__(self, root):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self.logger = logging.getLogger(__name__)

    def path(self, name: str) -> Path:
        return self.root / name

    # -----------------------------
    # Models and windows
    # -----------------------------

    def save_model(self, model: TsfModel, name: str = "model.npz") -> Path:
        path = save_model(model, self.path(name))
        self.logger.info("Saved model (%s parameters) to %s", model.num_parameters(), path)
        return path

    def save_windows(self, windows: WindowSet, name: str = "windows.npz") -> Path:
        path = windows.save(self.path(name))
        self.logger.info("Saved %s windows to %s", len(windows), path)
        return path

    # -----------------------------
    # Reports and tables
    # -----------------------------

    def write_json(self, name: str, payload) -> Path:
        path = self.path(name)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(payload, indent=2, sort_keys=True) + "\n", encoding="utf-8")
        self.logger.info("Wrote %s", path)
        return path

    def write_table(self, name: str, frame: pd.DataFrame, index: bool = False) -> Path:
        path = self.path(name)
        path.parent.mkdir(parents=True, exist_ok=True)
        frame.to_csv(path, index=index, float_format=FLOAT_FORMAT, encoding="utf-8")
        self.logger.info("Wrote %s rows to %s", len(frame), path)
        return path

    @staticmethod
    def read_table(path) -> pd.DataFrame:
        return pd.read_csv(path, encoding="utf-8")
