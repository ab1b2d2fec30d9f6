"""Agglomeration analysis of binary images of disk-like particles."""

from ._agglo import (
    CalibrationEntry,
    Configuration,
    __version__,
    analyze_image,
    calibrate,
    cade,
    clark_evans,
    delta_agg,
    dilate,
    euler_by_components,
    euler_number,
    euler_radius_curve,
    generate_configuration,
    image_cade,
    load_calibration,
    load_configuration,
    load_image,
    minkowski_reference,
    rasterize,
    run_experiment,
    save_calibration,
    save_configuration,
    save_image,
    schedule,
    thicken_trace,
    volume_fraction,
)

__all__ = [name for name in dir() if not name.startswith("_")] + ["__version__"]
