import logging

from tsf.data import config as settings
from tsf.datapipe.types import WindowSet
from tsf.model_train.config import TsfConfig, load_config
from tsf.utils.storage import RunStore


def resolve_seed(options: dict, fallback: int | None = None) -> int:
    if options.get("seed") is not None:
        return options["seed"]
    return settings.SEED if fallback is None else fallback


def resolve_config(options: dict, windows: WindowSet | None = None) -> TsfConfig:
    """Config file (or defaults) with ``--seed`` applied and the data shape taken from ``windows``."""
    cfg = load_config(options["config"]) if options.get("config") else TsfConfig()
    changes = {"seed": resolve_seed(options, cfg.seed)}
    if windows is not None:
        data_shape = {"imu_count": windows.imu_count, "window": windows.window,
                      "num_classes": max(windows.num_classes, 2)}
        for key, value in data_shape.items():
            if getattr(cfg, key) != value:
                logging.info(f"Config {key}={getattr(cfg, key)} replaced by {value} from the dataset")
        changes.update(data_shape)
    return cfg.replace(**changes)


def open_store(options: dict) -> RunStore:
    return RunStore(options["out_dir"])
