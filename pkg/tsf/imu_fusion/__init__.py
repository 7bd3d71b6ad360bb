from .complementary import (ComplementaryFilterParams, complementary_filter, complementary_filter_expanded,
                            estimate_attitude, grav_to_angles)
from .block import IMU_FUSION_MODES, ImuFusionBlock, ImuFusionOutput, imu_fusion_forward
