from .types import (GRAV, GYRO, LACC, SENSOR_KINDS, ClassSpec, ImuStream, RawRecording, SensorWindow,
                    SyntheticSpec, WindowSet)
from .filters import butterworth_gravity_split
from .segmentation import segment, segment_all, sensor_tensor
from .normalization import NormStats, fit_stats, znormalize
from .resampling import resample_linear, resample_recording
from .synthetic import default_spec, generate_synthetic, gravity_from_angles
from .csv_io import ColumnMap, load_csv, write_csv
from .manifest import DatasetManifest, dump_manifest, load_manifest
