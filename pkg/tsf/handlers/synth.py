from tsf.datapipe.csv_io import write_csv
from tsf.datapipe.manifest import DatasetManifest, dump_manifest
from tsf.datapipe.normalization import znormalize
from tsf.datapipe.segmentation import segment_all
from tsf.datapipe.synthetic import default_spec, generate_synthetic
from tsf.handlers.common import open_store, resolve_seed
from tsf.loader import dp


def arguments(parser):
    parser.add_argument("--subjects", type=int, default=3)
    parser.add_argument("--trials", type=int, default=2, help="trials per subject and class")
    parser.add_argument("--imu-count", type=int, default=1)
    parser.add_argument("--duration", type=float, default=16.0, help="seconds per recording")
    parser.add_argument("--window", type=int, default=128)
    parser.add_argument("--overlap", type=int, default=64)
    parser.add_argument("--grav-noise", type=float, default=0.0, help="std of high-frequency gravity noise")
    parser.add_argument("--gyro-noise", type=float, default=0.0, help="std of low-frequency gyroscope drift")
    parser.add_argument("--with-gravimeter", action="store_true", help="emit grav_x/y/z columns")


@dp.command_handler("synth", help="Generate the synthetic activity dataset", arguments=arguments)
def synth(options: dict) -> str:
    seed = resolve_seed(options)
    spec = default_spec(
        subjects=options["subjects"],
        trials_per_subject=options["trials"],
        imu_count=options["imu_count"],
        duration_s=options["duration"],
        window=options["window"],
        overlap=options["overlap"],
        grav_noise=options["grav_noise"],
        gyro_noise=options["gyro_noise"],
        with_gravimeter=options["with_gravimeter"],
    )
    recordings = generate_synthetic(spec, seed)
    class_names = [c.name for c in spec.classes]
    windows, stats = znormalize(segment_all(recordings, spec.window, spec.overlap, class_names))

    store = open_store(options)
    write_csv(recordings, store.path("recordings.csv"))
    dump_manifest(DatasetManifest(spec.sample_rate_hz, spec.window, spec.overlap, len(class_names),
                                  spec.imu_count, class_names), store.path("manifest.env"))
    store.save_windows(windows)
    store.write_json("norm_stats.json", stats.as_dict())
    return f"{len(recordings)} recordings, {len(windows)} windows in {store.root}"
