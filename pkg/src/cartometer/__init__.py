"""cartometer: measurable, resolution-independent geometry from raster maps."""

from .boundary import (
    FourierBoundary,
    FourierBoundaryFitter,
    FitReport,
    fit_error_curve,
    fit_fourier_boundary,
    fourier_area,
    sample_boundary,
)
from .calibration import (
    CalibrationTransform,
    ControlPoint,
    PixelPoint,
    PixelToWorldCalibrator,
    apply_transform,
    calibrate,
    fit_affine,
    fit_similarity,
    invert,
    rms_residual,
)
from .geodesy import (
    EARTH_RADIUS_KM,
    GeoPoint,
    anomaly_ratio,
    geodesic_polygon_area,
    haversine_distance,
    mercator_forward,
    mercator_inverse,
    mercator_scale_factor,
)
from .geometry import (
    BoundingBox,
    WorldPoint,
    bounding_box,
    is_simple,
    polygon_area,
    polyline_length,
)
from .session import (
    Feature,
    MeasurementReport,
    Session,
    add_point,
    convert_display,
    load_session,
    make_control_point,
    measure_feature,
    save_session,
    set_calibration,
)

__version__ = "0.1.0"
