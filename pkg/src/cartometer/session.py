"""Sessions: the persisted unit of work.

A session binds one raster map image to its calibration and all traced
features. Features store PIXEL coordinates as ground truth; world and
geographic values are always derived through the current calibration, so
recalibrating retroactively corrects every measurement.

Session values are immutable; mutating operations return a new Session.

File format: one UTF-8 JSON document, schema_version "1". Top-level keys:
schema_version, image {path, width_px, height_px}, projection,
display_unit, calibration (null or {kind, coefficients, flip,
rms_residual, control_points}), features [{id, kind, name, points}].
Numbers are serialized with full round-trip precision.
"""

from __future__ import annotations

import json
import math
import os
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Optional

from . import geodesy, geometry
from .calibration import (
    AFFINE,
    SIMILARITY,
    CalibrationTransform,
    ControlPoint,
    apply_transform,
)
from .errors import (
    DuplicatePointError,
    IncompleteFeatureError,
    InvalidInputError,
    NotFoundError,
    SchemaVersionError,
    SchemaViolationError,
    UncalibratedSessionError,
)

SCHEMA_VERSION = "1"

PROJECTION_WEB_MERCATOR = "web_mercator"
PROJECTION_PLANAR_UNKNOWN = "planar_unknown"
PROJECTIONS = (PROJECTION_WEB_MERCATOR, PROJECTION_PLANAR_UNKNOWN)

ROUTE = "route"
REGION = "region"

# per-km factors; areas use the square of the length factor
LENGTH_UNIT_FACTORS = {"m": 1000.0, "km": 1.0, "mi": 0.621371}


@dataclass(frozen=True)
class ImageRef:
    path: str
    width_px: int
    height_px: int


@dataclass(frozen=True)
class Feature:
    """A traced route (open polyline) or region (closed polygon), in pixels."""

    id: str
    kind: str
    name: str
    points: tuple[tuple[float, float], ...]


@dataclass(frozen=True)
class Calibration:
    transform: CalibrationTransform
    control_points: tuple[ControlPoint, ...]

    @property
    def georeferenced(self) -> bool:
        return bool(self.control_points) and all(
            cp.geo is not None for cp in self.control_points
        )


@dataclass(frozen=True)
class Session:
    image: ImageRef
    projection: str = PROJECTION_WEB_MERCATOR
    display_unit: str = "km"
    calibration: Optional[Calibration] = None
    features: tuple[Feature, ...] = ()

    def feature(self, feature_id: str) -> Feature:
        for f in self.features:
            if f.id == feature_id:
                return f
        raise NotFoundError(f"feature not found: {feature_id!r}")


@dataclass(frozen=True)
class MeasurementReport:
    feature_id: str
    kind: str
    planar_value: float
    geodesic_value: Optional[float]
    anomaly_ratio: Optional[float]
    bounding_box: geometry.BoundingBox
    simple: bool
    display_unit: str
    display_value: float


def add_feature(session: Session, feature: Feature) -> Session:
    if feature.kind not in (ROUTE, REGION):
        raise InvalidInputError(f"unknown feature kind {feature.kind!r}")
    if any(f.id == feature.id for f in session.features):
        raise InvalidInputError(f"duplicate feature id {feature.id!r}")
    return replace(session, features=session.features + (feature,))


def add_point(session: Session, feature_id: str, point) -> Session:
    """Append one pixel point to a feature; rejects a duplicate of the last point."""
    u, v = float(point[0]), float(point[1])
    if not (math.isfinite(u) and math.isfinite(v)):
        raise InvalidInputError("pixel coordinates must be finite")
    feature = session.feature(feature_id)
    if feature.points:
        lu, lv = feature.points[-1]
        if math.hypot(u - lu, v - lv) <= geometry.DUPLICATE_TOLERANCE_KM:
            raise DuplicatePointError(f"point ({u}, {v}) duplicates the last traced point")
    updated = replace(feature, points=feature.points + ((u, v),))
    return replace(
        session,
        features=tuple(updated if f.id == feature_id else f for f in session.features),
    )


def set_calibration(session: Session, pairs, kind: str = SIMILARITY) -> Session:
    """Fit and attach a calibration from ControlPoint pairs.

    For georeferenced pairs (geo set) the world side must already be the
    Mercator projection of geo; `make_control_point` takes care of that.
    """
    from .calibration import calibrate

    transform = calibrate(list(pairs), kind=kind)
    return replace(
        session, calibration=Calibration(transform=transform, control_points=tuple(pairs))
    )


def make_control_point(pixel, world=None, geo=None, label: str = "") -> ControlPoint:
    """Build a ControlPoint; geo pairs are projected to Mercator km for the fit."""
    if (world is None) == (geo is None):
        raise InvalidInputError("control point needs exactly one of world= or geo=")
    if geo is not None:
        world = geodesy.mercator_forward(geo)
        geo = (float(geo[0]), float(geo[1]))
    return ControlPoint(
        pixel=(float(pixel[0]), float(pixel[1])),
        world=(float(world[0]), float(world[1])),
        geo=geo,
        label=label,
    )


def convert_display(value: float, unit: str, kind: str = "length") -> float:
    """Convert a km (or km²) value to the display unit. Pure; never mutates state."""
    if unit not in LENGTH_UNIT_FACTORS:
        raise InvalidInputError(f"unsupported display unit {unit!r}")
    factor = LENGTH_UNIT_FACTORS[unit]
    if kind == "length":
        return value * factor
    if kind == "area":
        return value * factor * factor
    raise InvalidInputError(f"unknown quantity kind {kind!r}")


def measure_feature(session: Session, feature_id: str) -> MeasurementReport:
    """Measure one feature through the current calibration.

    Routes get polyline length; regions get shoelace area plus a simplicity
    flag. Georeferenced Web Mercator sessions also get the geodesic value
    (haversine chain / spherical polygon area) and the planar/geodesic
    anomaly ratio.
    """
    feature = session.feature(feature_id)
    if session.calibration is None:
        raise UncalibratedSessionError("session has no calibration; calibrate first")

    world = apply_transform(session.calibration.transform, list(feature.points)) if feature.points else None
    if world is not None:
        world = geometry.dedupe_consecutive(world)
    if feature.kind == ROUTE:
        if world is None or world.shape[0] < 2:
            raise IncompleteFeatureError(f"route {feature_id!r} needs >= 2 distinct points")
        planar = geometry.polyline_length(world)
        simple = True
        quantity = "length"
    elif feature.kind == REGION:
        if world is not None:
            world = geometry.strip_closing_vertex(world)
        if world is None or world.shape[0] < 3:
            raise IncompleteFeatureError(f"region {feature_id!r} needs >= 3 distinct points")
        planar = geometry.polygon_area(world)
        simple = geometry.is_simple(world)
        quantity = "area"
    else:
        raise InvalidInputError(f"unknown feature kind {feature.kind!r}")

    bbox = geometry.bounding_box(world)
    geodesic_value = None
    anomaly = None
    if session.projection == PROJECTION_WEB_MERCATOR and session.calibration.georeferenced:
        latlon = geodesy.mercator_inverse_array(world)
        if feature.kind == ROUTE:
            geodesic_value = geodesy.chain_distance(latlon)
        else:
            geodesic_value = geodesy.geodesic_polygon_area(latlon)
        if geodesic_value > 0:
            anomaly = geodesy.anomaly_ratio(planar, geodesic_value)

    return MeasurementReport(
        feature_id=feature_id,
        kind=feature.kind,
        planar_value=planar,
        geodesic_value=geodesic_value,
        anomaly_ratio=anomaly,
        bounding_box=bbox,
        simple=simple,
        display_unit=session.display_unit,
        display_value=convert_display(planar, session.display_unit, quantity),
    )


# ---------------------------------------------------------------------------
# persistence


def session_to_dict(session: Session) -> dict:
    cal = None
    if session.calibration is not None:
        t = session.calibration.transform
        cal = {
            "kind": t.kind,
            "coefficients": list(t.coefficients),
            "flip": t.flip,
            "rms_residual": t.rms_residual,
            "control_points": [
                {
                    "pixel": list(cp.pixel),
                    "world": list(cp.world),
                    "geo": list(cp.geo) if cp.geo is not None else None,
                    "label": cp.label,
                }
                for cp in session.calibration.control_points
            ],
        }
    return {
        "schema_version": SCHEMA_VERSION,
        "image": {
            "path": session.image.path,
            "width_px": session.image.width_px,
            "height_px": session.image.height_px,
        },
        "projection": session.projection,
        "display_unit": session.display_unit,
        "calibration": cal,
        "features": [
            {"id": f.id, "kind": f.kind, "name": f.name, "points": [list(p) for p in f.points]}
            for f in session.features
        ],
    }


def session_to_json(session: Session) -> str:
    """Canonical on-disk / on-wire serialization."""
    return json.dumps(session_to_dict(session), indent=2, ensure_ascii=False) + "\n"


def _expect(data, key, types, path):
    if not isinstance(data, dict):
        raise SchemaViolationError(f"{path}: expected an object")
    if key not in data:
        raise SchemaViolationError(f"{path}.{key}: missing required field")
    value = data[key]
    if types is not None and not isinstance(value, types):
        raise SchemaViolationError(
            f"{path}.{key}: expected {getattr(types, '__name__', types)}, got {type(value).__name__}"
        )
    return value


def _expect_number(data, key, path):
    value = _expect(data, key, (int, float), path)
    if isinstance(value, bool) or not math.isfinite(float(value)):
        raise SchemaViolationError(f"{path}.{key}: expected a finite number")
    return float(value)


def _parse_points(raw, path) -> tuple[tuple[float, float], ...]:
    if not isinstance(raw, list):
        raise SchemaViolationError(f"{path}: expected a list of [u, v] pairs")
    points = []
    for i, item in enumerate(raw):
        if (
            not isinstance(item, list)
            or len(item) != 2
            or any(isinstance(c, bool) or not isinstance(c, (int, float)) for c in item)
        ):
            raise SchemaViolationError(f"{path}[{i}]: expected a [u, v] number pair")
        if any(not math.isfinite(float(c)) for c in item):
            raise SchemaViolationError(f"{path}[{i}]: coordinates must be finite")
        points.append((float(item[0]), float(item[1])))
    return tuple(points)


def session_from_dict(data: dict) -> Session:
    if not isinstance(data, dict):
        raise SchemaViolationError("$: expected a JSON object")
    version = _expect(data, "schema_version", str, "$")
    if version != SCHEMA_VERSION:
        raise SchemaVersionError(f"$.schema_version: unsupported version {version!r}")

    image_raw = _expect(data, "image", dict, "$")
    image = ImageRef(
        path=_expect(image_raw, "path", str, "$.image"),
        width_px=int(_expect_number(image_raw, "width_px", "$.image")),
        height_px=int(_expect_number(image_raw, "height_px", "$.image")),
    )
    projection = _expect(data, "projection", str, "$")
    if projection not in PROJECTIONS:
        raise SchemaViolationError(f"$.projection: unknown projection {projection!r}")
    display_unit = _expect(data, "display_unit", str, "$")
    if display_unit not in LENGTH_UNIT_FACTORS:
        raise SchemaViolationError(f"$.display_unit: unknown unit {display_unit!r}")

    cal_raw = _expect(data, "calibration", (dict, type(None)), "$")
    calibration = None
    if cal_raw is not None:
        kind = _expect(cal_raw, "kind", str, "$.calibration")
        if kind not in (SIMILARITY, AFFINE):
            raise SchemaViolationError(f"$.calibration.kind: unknown kind {kind!r}")
        coeffs_raw = _expect(cal_raw, "coefficients", list, "$.calibration")
        coeffs = []
        for i, c in enumerate(coeffs_raw):
            if isinstance(c, bool) or not isinstance(c, (int, float)) or not math.isfinite(float(c)):
                raise SchemaViolationError(
                    f"$.calibration.coefficients[{i}]: expected a finite number"
                )
            coeffs.append(float(c))
        expected_len = 4 if kind == SIMILARITY else 6
        if len(coeffs) != expected_len:
            raise SchemaViolationError(
                f"$.calibration.coefficients: {kind} needs {expected_len} values, got {len(coeffs)}"
            )
        flip = _expect(cal_raw, "flip", bool, "$.calibration")
        rms = _expect_number(cal_raw, "rms_residual", "$.calibration")
        cps_raw = _expect(cal_raw, "control_points", list, "$.calibration")
        cps = []
        for i, cp_raw in enumerate(cps_raw):
            cp_path = f"$.calibration.control_points[{i}]"
            pixel = _parse_points([_expect(cp_raw, "pixel", list, cp_path)], cp_path + ".pixel")[0]
            world = _parse_points([_expect(cp_raw, "world", list, cp_path)], cp_path + ".world")[0]
            geo_raw = _expect(cp_raw, "geo", (list, type(None)), cp_path)
            geo = (
                _parse_points([geo_raw], cp_path + ".geo")[0] if geo_raw is not None else None
            )
            label = _expect(cp_raw, "label", str, cp_path)
            cps.append(ControlPoint(pixel=pixel, world=world, geo=geo, label=label))
        transform = CalibrationTransform(
            kind=kind, coefficients=tuple(coeffs), flip=flip, rms_residual=rms
        )
        calibration = Calibration(transform=transform, control_points=tuple(cps))

    features_raw = _expect(data, "features", list, "$")
    features = []
    seen_ids = set()
    for i, f_raw in enumerate(features_raw):
        f_path = f"$.features[{i}]"
        fid = _expect(f_raw, "id", str, f_path)
        if fid in seen_ids:
            raise SchemaViolationError(f"{f_path}.id: duplicate feature id {fid!r}")
        seen_ids.add(fid)
        kind = _expect(f_raw, "kind", str, f_path)
        if kind not in (ROUTE, REGION):
            raise SchemaViolationError(f"{f_path}.kind: unknown kind {kind!r}")
        name = _expect(f_raw, "name", str, f_path)
        points = _parse_points(_expect(f_raw, "points", list, f_path), f_path + ".points")
        features.append(Feature(id=fid, kind=kind, name=name, points=points))

    return Session(
        image=image,
        projection=projection,
        display_unit=display_unit,
        calibration=calibration,
        features=tuple(features),
    )


def save_session(session: Session, path) -> None:
    """Atomic write: serialize to a temp file in the same directory, then rename."""
    path = Path(path)
    tmp = path.with_suffix(path.suffix + ".tmp")
    tmp.write_text(session_to_json(session), encoding="utf-8")
    os.replace(tmp, path)


def load_session(path) -> Session:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaViolationError(f"{path}: not valid JSON (line {exc.lineno}: {exc.msg})")
    return session_from_dict(data)
