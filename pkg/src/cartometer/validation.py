"""Input validation helpers: coerce point collections to clean float arrays."""

from __future__ import annotations

import numpy as np

from .errors import InvalidInputError


def as_point_array(points, *, min_points: int = 1, name: str = "points") -> np.ndarray:
    """Coerce array-like (or a single (x, y) pair) into an (N, 2) float64 array.

    Accepts lists of tuples, Nx2 arrays, or objects exposing .x/.y.
    """
    if points is None:
        raise InvalidInputError(f"{name}: expected a point list, got None")
    seq = list(points) if not isinstance(points, np.ndarray) else points
    if len(seq) > 0 and hasattr(seq[0], "x") and hasattr(seq[0], "y"):
        seq = [(p.x, p.y) for p in seq]
    arr = np.asarray(seq, dtype=np.float64)
    if arr.size == 0:
        arr = arr.reshape(0, 2)
    if arr.ndim != 2 or arr.shape[1] != 2:
        raise InvalidInputError(f"{name}: expected an (N, 2) point array, got shape {arr.shape}")
    if arr.shape[0] < min_points:
        raise InvalidInputError(
            f"{name}: need at least {min_points} point(s), got {arr.shape[0]}"
        )
    if not np.all(np.isfinite(arr)):
        raise InvalidInputError(f"{name}: coordinates must be finite")
    return arr


def as_latlon_array(points, *, min_points: int = 1, name: str = "points") -> np.ndarray:
    """Like as_point_array but for (lat, lon) pairs, with range checks."""
    if len(points) > 0 and hasattr(points[0], "lat"):
        points = [(p.lat, p.lon) for p in points]
    arr = as_point_array(points, min_points=min_points, name=name)
    lat, lon = arr[:, 0], arr[:, 1]
    if np.any(lat < -90.0) or np.any(lat > 90.0):
        raise InvalidInputError(f"{name}: latitude out of [-90, 90]")
    if np.any(lon <= -180.0) or np.any(lon > 180.0):
        raise InvalidInputError(f"{name}: longitude out of (-180, 180]")
    return arr


def check_positive(value: float, name: str) -> float:
    if not np.isfinite(value) or value <= 0:
        raise InvalidInputError(f"{name}: must be positive and finite, got {value!r}")
    return float(value)
