from pathlib import Path

from tsf.datapipe.csv_io import ColumnMap, load_csv
from tsf.datapipe.manifest import load_manifest
from tsf.datapipe.normalization import znormalize
from tsf.datapipe.resampling import resample_recording
from tsf.datapipe.segmentation import segment_all
from tsf.exceptions import ConfigError
from tsf.handlers.common import open_store
from tsf.loader import dp


def arguments(parser):
    parser.add_argument("--input", required=True, help="long-format CSV of raw recordings")
    parser.add_argument("--manifest", default=None, help="manifest file (default: manifest.env next to the CSV)")
    parser.add_argument("--resample-hz", type=float, default=None, help="resample every recording to this rate")
    parser.add_argument("--rename", action="append", default=[], metavar="OLD=NEW",
                        help="map a file column onto a schema column; repeatable")


def column_map(pairs: list[str]) -> ColumnMap:
    renames = {}
    for pair in pairs:
        old, sep, new = pair.partition("=")
        if not sep or not old or not new:
            raise ConfigError(f"--rename expects OLD=NEW, got {pair!r}")
        renames[old] = new
    return ColumnMap(renames)


@dp.command_handler("preprocess", help="Segment and normalize a CSV dataset into windows", arguments=arguments)
def preprocess(options: dict) -> str:
    source = Path(options["input"])
    manifest = load_manifest(options["manifest"] or source.with_name("manifest.env"))
    recordings = load_csv(source, column_map(options["rename"]), manifest.sample_rate_hz)
    if options["resample_hz"]:
        recordings = [resample_recording(r, options["resample_hz"]) for r in recordings]
    windows, stats = znormalize(segment_all(recordings, manifest.window, manifest.overlap,
                                            manifest.class_names or None))
    if manifest.imu_count is not None and windows.imu_count != manifest.imu_count:
        raise ConfigError(f"manifest declares {manifest.imu_count} IMUs, data has {windows.imu_count}")

    store = open_store(options)
    store.save_windows(windows)
    store.write_json("norm_stats.json", stats.as_dict())
    return f"{len(windows)} windows of length {windows.window} from {len(recordings)} recordings"
