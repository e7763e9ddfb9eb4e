"""Spherical-Earth geographics and the Web Mercator projection.

Angles are degrees at the API boundary, radians internally. Mercator
coordinates are kilometers on the spherical Web Mercator plane, so they
live in the same unit system as the calibrated workspace.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError, ProjectionDomainError
from .validation import as_latlon_array, as_point_array

EARTH_RADIUS_KM = 6371.0088
MAX_MERCATOR_LAT = 85.05113  # |lat| limit of the square Web Mercator domain


@dataclass(frozen=True)
class GeoPoint:
    """WGS84-style geographic point, degrees: lat in [-90, 90], lon in (-180, 180]."""

    lat: float
    lon: float


def haversine_distance(a, b) -> float:
    """Great-circle distance in km between two (lat, lon) points."""
    (lat1, lon1), (lat2, lon2) = _latlon(a), _latlon(b)
    phi1, phi2 = math.radians(lat1), math.radians(lat2)
    dphi = phi2 - phi1
    dlam = math.radians(lon2 - lon1)
    h = math.sin(dphi / 2.0) ** 2 + math.cos(phi1) * math.cos(phi2) * math.sin(dlam / 2.0) ** 2
    return 2.0 * EARTH_RADIUS_KM * math.asin(min(1.0, math.sqrt(h)))


def _latlon(p):
    if hasattr(p, "lat"):
        return float(p.lat), float(p.lon)
    lat, lon = p
    return float(lat), float(lon)


def _check_mercator_lat(lat: float) -> None:
    if not math.isfinite(lat) or abs(lat) >= MAX_MERCATOR_LAT:
        raise ProjectionDomainError(
            f"latitude {lat!r} outside Web Mercator domain (|lat| < {MAX_MERCATOR_LAT})"
        )


def mercator_forward(p) -> tuple[float, float]:
    """Project (lat, lon) to Web Mercator (mx, my) in km."""
    lat, lon = _latlon(p)
    _check_mercator_lat(lat)
    phi = math.radians(lat)
    lam = math.radians(lon)
    mx = EARTH_RADIUS_KM * lam
    # asinh(tan(phi)) == ln(tan(pi/4 + phi/2)), but exact at phi = 0
    my = EARTH_RADIUS_KM * math.asinh(math.tan(phi))
    return mx, my


def mercator_inverse(m) -> tuple[float, float]:
    """Exact analytic inverse of mercator_forward; returns (lat, lon) degrees."""
    mx, my = float(m[0]), float(m[1])
    lam = mx / EARTH_RADIUS_KM
    phi = 2.0 * math.atan(math.exp(my / EARTH_RADIUS_KM)) - math.pi / 2.0
    return math.degrees(phi), math.degrees(lam)


def mercator_scale_factor(lat: float) -> float:
    """Local length distortion of Web Mercator at a latitude: k = 1/cos(lat)."""
    _check_mercator_lat(float(lat))
    return 1.0 / math.cos(math.radians(float(lat)))


def geodesic_polygon_area(vertices) -> float:
    """Spherical polygon area in km² from (lat, lon) vertices.

    Uses the latitude-weighted longitude-sum excess formula; accurate for
    polygons much smaller than a hemisphere.
    """
    arr = as_latlon_array(vertices, min_points=1, name="geodesic polygon")
    if arr.shape[0] < 3:
        raise InvalidInputError(f"geodesic polygon: need >= 3 vertices, got {arr.shape[0]}")
    phi = np.radians(arr[:, 0])
    lam = np.radians(arr[:, 1])
    lam_next = np.roll(lam, -1)
    phi_next = np.roll(phi, -1)
    # unwrap edge longitude steps so antimeridian-crossing edges stay short
    dlam = (lam_next - lam + math.pi) % (2.0 * math.pi) - math.pi
    total = np.sum(dlam * (2.0 + np.sin(phi) + np.sin(phi_next)))
    return float(abs(total) * EARTH_RADIUS_KM**2 / 2.0)


def chain_distance(points) -> float:
    """Sum of haversine distances along consecutive (lat, lon) points."""
    arr = as_latlon_array(points, min_points=1, name="geodesic chain")
    return float(
        sum(haversine_distance(arr[i], arr[i + 1]) for i in range(arr.shape[0] - 1))
    )


def anomaly_ratio(planar_value: float, geodesic_value: float) -> float:
    """Planar (on-map) measurement over geodesic (real-Earth) measurement.

    1.0 means the map measurement matches reality.
    """
    if not geodesic_value > 0:
        raise InvalidInputError(f"geodesic value must be > 0, got {geodesic_value!r}")
    return float(planar_value) / float(geodesic_value)


def mercator_forward_array(latlon) -> np.ndarray:
    """Vectorized mercator_forward over an (N, 2) lat/lon array."""
    arr = as_latlon_array(latlon, min_points=1, name="mercator points")
    if np.any(np.abs(arr[:, 0]) >= MAX_MERCATOR_LAT):
        raise ProjectionDomainError("latitude outside Web Mercator domain")
    phi = np.radians(arr[:, 0])
    lam = np.radians(arr[:, 1])
    mx = EARTH_RADIUS_KM * lam
    my = EARTH_RADIUS_KM * np.arcsinh(np.tan(phi))
    return np.column_stack([mx, my])


def mercator_inverse_array(merc) -> np.ndarray:
    """Vectorized mercator_inverse over an (N, 2) km array; returns (lat, lon)."""
    arr = as_point_array(merc, min_points=1, name="mercator points")
    lam = arr[:, 0] / EARTH_RADIUS_KM
    phi = 2.0 * np.arctan(np.exp(arr[:, 1] / EARTH_RADIUS_KM)) - np.pi / 2.0
    return np.column_stack([np.degrees(phi), np.degrees(lam)])
