"""Shared report serialization for the CLI and the REST service.

Both surfaces must emit byte-identical JSON for the same session state, so
this module is the single place that turns reports into text.
"""

from __future__ import annotations

import json

import numpy as np

from .boundary import FitReport
from .session import MeasurementReport


def measurement_to_dict(report: MeasurementReport) -> dict:
    # key order is part of the public contract
    return {
        "feature_id": report.feature_id,
        "kind": report.kind,
        "planar": report.planar_value,
        "geodesic": report.geodesic_value,
        "anomaly_ratio": report.anomaly_ratio,
        "bbox_w": report.bounding_box.width,
        "bbox_h": report.bounding_box.height,
        "bbox_area": report.bounding_box.area,
        "simple": report.simple,
        "unit": report.display_unit,
        "display": report.display_value,
    }


def dumps_measurement(report: MeasurementReport) -> str:
    """Single-line JSON with full float precision; stable key order."""
    return json.dumps(measurement_to_dict(report), separators=(",", ":"))


def format_measurement_text(report: MeasurementReport) -> str:
    unit = report.display_unit
    qty_unit = unit if report.kind == "route" else f"{unit}^2"
    lines = [
        f"feature      {report.feature_id} ({report.kind})",
        f"planar       {report.planar_value:.6g} {'km' if report.kind == 'route' else 'km^2'}",
    ]
    if report.geodesic_value is not None:
        lines.append(
            f"geodesic     {report.geodesic_value:.6g} {'km' if report.kind == 'route' else 'km^2'}"
        )
        lines.append(f"anomaly      {report.anomaly_ratio:.6g}")
    lines += [
        f"bbox         {report.bounding_box.width:.6g} x {report.bounding_box.height:.6g} km "
        f"(area {report.bounding_box.area:.6g} km^2)",
        f"simple       {'yes' if report.simple else 'no'}",
        f"display      {report.display_value:.6g} {qty_unit}",
    ]
    return "\n".join(lines)


def fit_to_dict(feature_id: str, report: FitReport, samples: np.ndarray) -> dict:
    return {
        "feature_id": feature_id,
        "n": report.boundary.n,
        "rms": report.rms_error,
        "area": report.area,
        "samples": [[float(x), float(y)] for x, y in samples],
    }


def dumps_fit(feature_id: str, report: FitReport, samples: np.ndarray) -> str:
    return json.dumps(fit_to_dict(feature_id, report, samples), separators=(",", ":"))


def format_fit_text(feature_id: str, report: FitReport) -> str:
    return "\n".join(
        [
            f"feature      {feature_id}",
            f"harmonics    {report.boundary.n}",
            f"rms_error    {report.rms_error:.6g} km",
            f"area         {report.area:.6g} km^2",
        ]
    )


def error_curve_csv(rows) -> str:
    out = ["n,rms_error,area"]
    for n, rms, area in rows:
        out.append(f"{n},{rms!r},{area!r}")
    return "\n".join(out)
