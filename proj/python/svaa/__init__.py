"""Python bindings for the svaa analytics core."""

from ._core import (
    CameraConfig,
    Error,
    RollingHistory,
    RunningMoments,
    Store,
    accumulate_grid,
    align_to_interval,
    anomaly_check,
    bev_transform,
    classify_occupancy,
    default_config_json,
    default_profile_json,
    gaussian_smooth,
    normalize_record,
    parse_record,
    percentile_nearest_rank,
    render_pgm,
    scale_factor,
    simulate,
)

__all__ = [
    "CameraConfig",
    "Error",
    "RollingHistory",
    "RunningMoments",
    "Store",
    "accumulate_grid",
    "align_to_interval",
    "anomaly_check",
    "bev_transform",
    "classify_occupancy",
    "default_config_json",
    "default_profile_json",
    "gaussian_smooth",
    "normalize_record",
    "parse_record",
    "percentile_nearest_rank",
    "render_pgm",
    "scale_factor",
    "simulate",
]
