"""Pure planar geometry over calibrated world coordinates (kilometers, y up).

All functions accept anything `validation.as_point_array` understands:
lists of (x, y) tuples, Nx2 arrays, or WorldPoint instances.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError
from .validation import as_point_array

# Consecutive points closer than this (km) count as duplicates.
DUPLICATE_TOLERANCE_KM = 1e-12


@dataclass(frozen=True)
class WorldPoint:
    """A point in the calibrated planar workspace: x east, y north, in km."""

    x: float
    y: float


@dataclass(frozen=True)
class BoundingBox:
    width: float
    height: float
    area: float


def dedupe_consecutive(points, tol: float = DUPLICATE_TOLERANCE_KM) -> np.ndarray:
    """Drop points that coincide with their predecessor within tol."""
    arr = as_point_array(points, min_points=1)
    keep = [0]
    for i in range(1, arr.shape[0]):
        if np.hypot(*(arr[i] - arr[keep[-1]])) > tol:
            keep.append(i)
    return arr[keep]


def strip_closing_vertex(vertices, tol: float = DUPLICATE_TOLERANCE_KM) -> np.ndarray:
    """Canonicalize a polygon: drop a duplicated closing vertex if present."""
    arr = as_point_array(vertices, min_points=1)
    if arr.shape[0] >= 2 and np.hypot(*(arr[-1] - arr[0])) <= tol:
        arr = arr[:-1]
    return arr


def _validate_polyline(points) -> np.ndarray:
    arr = as_point_array(points, min_points=1, name="polyline")
    if arr.shape[0] >= 2:
        gaps = np.hypot(*(np.diff(arr, axis=0).T))
        if np.any(gaps <= DUPLICATE_TOLERANCE_KM):
            raise InvalidInputError("polyline: consecutive duplicate points")
    return arr


def _validate_polygon(vertices) -> np.ndarray:
    arr = strip_closing_vertex(vertices)
    if arr.shape[0] < 3:
        raise InvalidInputError(f"polygon: need >= 3 vertices, got {arr.shape[0]}")
    closed = np.vstack([arr, arr[0]])
    gaps = np.hypot(*(np.diff(closed, axis=0).T))
    if np.any(gaps <= DUPLICATE_TOLERANCE_KM):
        raise InvalidInputError("polygon: consecutive duplicate vertices")
    return arr


def polyline_length(points) -> float:
    """Total Euclidean length of an open polyline, in km. 0 for a single point."""
    arr = _validate_polyline(points)
    if arr.shape[0] < 2:
        return 0.0
    return float(np.hypot(*(np.diff(arr, axis=0).T)).sum())


def polygon_area(vertices) -> float:
    """Unsigned shoelace area of a polygon, in km².

    Orientation-independent. Non-simple polygons are accepted and yield the
    absolute signed area; callers that care should check `is_simple`.
    """
    arr = _validate_polygon(vertices)
    x, y = arr[:, 0], arr[:, 1]
    xn, yn = np.roll(x, -1), np.roll(y, -1)
    return float(abs(np.sum(x * yn - xn * y)) / 2.0)


def bounding_box(points) -> BoundingBox:
    """Axis-aligned extents of a point set."""
    arr = as_point_array(points, min_points=1, name="bounding_box points")
    width = float(arr[:, 0].max() - arr[:, 0].min())
    height = float(arr[:, 1].max() - arr[:, 1].min())
    return BoundingBox(width=width, height=height, area=width * height)


def _orient(p, q, r) -> float:
    return (q[0] - p[0]) * (r[1] - p[1]) - (q[1] - p[1]) * (r[0] - p[0])


def _on_segment(p, q, r) -> bool:
    # r known collinear with pq; is it within the segment's box?
    return (
        min(p[0], q[0]) <= r[0] <= max(p[0], q[0])
        and min(p[1], q[1]) <= r[1] <= max(p[1], q[1])
    )


def _segments_intersect(p1, p2, q1, q2) -> bool:
    d1 = _orient(q1, q2, p1)
    d2 = _orient(q1, q2, p2)
    d3 = _orient(p1, p2, q1)
    d4 = _orient(p1, p2, q2)
    if ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0)) and d1 != 0 and d2 != 0:
        return True
    if d1 == 0 and _on_segment(q1, q2, p1):
        return True
    if d2 == 0 and _on_segment(q1, q2, p2):
        return True
    if d3 == 0 and _on_segment(p1, p2, q1):
        return True
    if d4 == 0 and _on_segment(p1, p2, q2):
        return True
    return False


def is_simple(vertices) -> bool:
    """True iff no two non-adjacent polygon edges intersect (O(n²) pairwise)."""
    arr = _validate_polygon(vertices)
    n = arr.shape[0]
    edges = [(arr[i], arr[(i + 1) % n]) for i in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if j == i + 1 or (i == 0 and j == n - 1):
                continue  # adjacent edges share a vertex by construction
            if _segments_intersect(*edges[i], *edges[j]):
                return False
    return True
