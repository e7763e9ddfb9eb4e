"""Pixel → world calibration from ground control points.

The similarity model is a uniform scale + rotation + translation with the
pixel v axis pre-flipped (v grows down on the image, y grows north in the
workspace). The flip is baked in rather than fitted, which avoids spurious
mirror solutions when only two control points are available.

Coefficients, with a = s·cosθ and b = s·sinθ:

    similarity (flipped):  x = a·u + b·v + tx,   y = b·u − a·v + ty
    affine:                x = a·u + b·v + e,    y = c·u + d·v + f

Pixel coordinates are centered/scaled to unit RMS before the least-squares
solve, then the transform is de-normalized.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from itertools import combinations
from typing import Optional

import numpy as np
from sklearn.base import BaseEstimator

from .errors import (
    DegenerateConfigurationError,
    InsufficientDataError,
    InvalidInputError,
    NonInvertibleError,
)
from .validation import as_point_array

SIMILARITY = "similarity"
AFFINE = "affine"

# pixel-space triangle area below which an affine configuration is collinear
_COLLINEAR_AREA_PX2 = 1e-9


@dataclass(frozen=True)
class PixelPoint:
    """Image-space point: u right, v down, in pixels."""

    u: float
    v: float


@dataclass(frozen=True)
class ControlPoint:
    """A location known in both pixel and world space.

    `geo` carries the original (lat, lon) when the session is georeferenced;
    `world` is then its Web Mercator projection in km.
    """

    pixel: tuple[float, float]
    world: tuple[float, float]
    geo: Optional[tuple[float, float]] = None
    label: str = ""


@dataclass(frozen=True)
class CalibrationTransform:
    """Fitted pixel→world map.

    kind "similarity": coefficients (s, theta, tx, ty), with `flip` telling
    whether the v axis is pre-reflected. kind "affine": coefficients
    (a, b, c, d, e, f).
    """

    kind: str
    coefficients: tuple[float, ...]
    flip: bool = True
    rms_residual: float = 0.0

    def __post_init__(self):
        if self.kind not in (SIMILARITY, AFFINE):
            raise InvalidInputError(f"unknown transform kind {self.kind!r}")
        n = 4 if self.kind == SIMILARITY else 6
        if len(self.coefficients) != n:
            raise InvalidInputError(
                f"{self.kind} transform needs {n} coefficients, got {len(self.coefficients)}"
            )

    def matrix(self) -> tuple[np.ndarray, np.ndarray]:
        """Return (M, t) such that world = M @ pixel + t."""
        if self.kind == SIMILARITY:
            s, theta, tx, ty = self.coefficients
            a, b = s * np.cos(theta), s * np.sin(theta)
            if self.flip:
                m = np.array([[a, b], [b, -a]])
            else:
                m = np.array([[a, -b], [b, a]])
            return m, np.array([tx, ty])
        a, b, c, d, e, f = self.coefficients
        return np.array([[a, b], [c, d]]), np.array([e, f])


IDENTITY = CalibrationTransform(kind=SIMILARITY, coefficients=(1.0, 0.0, 0.0, 0.0))


def pairs_to_arrays(pairs) -> tuple[np.ndarray, np.ndarray]:
    if len(pairs) > 0 and isinstance(pairs[0], ControlPoint):
        pixels = [p.pixel for p in pairs]
        worlds = [p.world for p in pairs]
        return as_point_array(pixels, name="pixel points"), as_point_array(worlds, name="world points")
    raise InvalidInputError("pairs must be ControlPoint instances")


def _normalize(pixels: np.ndarray) -> tuple[np.ndarray, np.ndarray, float]:
    center = pixels.mean(axis=0)
    spread = np.sqrt(np.mean(np.sum((pixels - center) ** 2, axis=1)))
    if spread <= 0:
        spread = 1.0
    return (pixels - center) / spread, center, spread


def fit_similarity(pixels, worlds) -> CalibrationTransform:
    """Least-squares flipped similarity through ≥2 control point pairs.

    Exactly interpolates when given 2 pairs.
    """
    px = as_point_array(pixels, name="pixel points")
    wd = as_point_array(worlds, name="world points")
    if px.shape != wd.shape:
        raise InvalidInputError("pixel and world point counts differ")
    if px.shape[0] < 2:
        raise InsufficientDataError("similarity fit needs >= 2 control points")
    if px.shape[0] == 2 and np.hypot(*(px[1] - px[0])) <= 0:
        raise DegenerateConfigurationError("coincident pixel control points")
    if np.allclose(px, px[0], atol=1e-12):
        raise DegenerateConfigurationError("all pixel control points coincide")

    norm, center, spread = _normalize(px)
    n = px.shape[0]
    # unknowns: (a, b, tx, ty) in the normalized pixel frame
    design = np.zeros((2 * n, 4))
    rhs = np.empty(2 * n)
    design[0::2, 0] = norm[:, 0]
    design[0::2, 1] = norm[:, 1]
    design[0::2, 2] = 1.0
    design[1::2, 0] = -norm[:, 1]
    design[1::2, 1] = norm[:, 0]
    design[1::2, 3] = 1.0
    rhs[0::2] = wd[:, 0]
    rhs[1::2] = wd[:, 1]
    sol, *_ = np.linalg.lstsq(design, rhs, rcond=None)
    a_n, b_n, tx_n, ty_n = sol

    a, b = a_n / spread, b_n / spread
    tx = tx_n - (a * center[0] + b * center[1])
    ty = ty_n - (b * center[0] - a * center[1])
    s = float(np.hypot(a, b))
    if s <= 0:
        raise DegenerateConfigurationError("similarity fit collapsed to zero scale")
    theta = float(np.arctan2(b, a))
    t = CalibrationTransform(kind=SIMILARITY, coefficients=(s, theta, float(tx), float(ty)))
    return replace(t, rms_residual=rms_residual(t, px, wd))


def _is_collinear(px: np.ndarray) -> bool:
    n = px.shape[0]
    if n <= 12:
        best = 0.0
        for i, j, k in combinations(range(n), 3):
            cross = (px[j] - px[i])[0] * (px[k] - px[i])[1] - (px[j] - px[i])[1] * (
                px[k] - px[i]
            )[0]
            best = max(best, abs(cross) / 2.0)
        return best <= _COLLINEAR_AREA_PX2
    sv = np.linalg.svd(px - px.mean(axis=0), compute_uv=False)
    return sv[1] * sv[1] <= _COLLINEAR_AREA_PX2


def fit_affine(pixels, worlds) -> CalibrationTransform:
    """Least-squares 6-parameter affine through ≥3 non-collinear pairs."""
    px = as_point_array(pixels, name="pixel points")
    wd = as_point_array(worlds, name="world points")
    if px.shape != wd.shape:
        raise InvalidInputError("pixel and world point counts differ")
    if px.shape[0] < 3:
        raise InsufficientDataError("affine fit needs >= 3 control points")
    if _is_collinear(px):
        raise DegenerateConfigurationError("collinear pixel control points")

    norm, center, spread = _normalize(px)
    design = np.column_stack([norm, np.ones(px.shape[0])])
    sol_x, *_ = np.linalg.lstsq(design, wd[:, 0], rcond=None)
    sol_y, *_ = np.linalg.lstsq(design, wd[:, 1], rcond=None)
    a, b = sol_x[0] / spread, sol_x[1] / spread
    c, d = sol_y[0] / spread, sol_y[1] / spread
    e = sol_x[2] - (a * center[0] + b * center[1])
    f = sol_y[2] - (c * center[0] + d * center[1])
    t = CalibrationTransform(
        kind=AFFINE, coefficients=(float(a), float(b), float(c), float(d), float(e), float(f))
    )
    return replace(t, rms_residual=rms_residual(t, px, wd))


def calibrate(pairs, kind: str = SIMILARITY) -> CalibrationTransform:
    """Fit a transform of the requested kind from ControlPoint pairs."""
    px, wd = pairs_to_arrays(pairs)
    if kind == SIMILARITY:
        return fit_similarity(px, wd)
    if kind == AFFINE:
        return fit_affine(px, wd)
    raise InvalidInputError(f"unknown calibration kind {kind!r}")


def apply_transform(t: CalibrationTransform, points) -> np.ndarray:
    """Map pixel points through the transform; returns an (N, 2) world array."""
    arr = as_point_array(points, name="points")
    m, offset = t.matrix()
    return arr @ m.T + offset


def apply_point(t: CalibrationTransform, point) -> tuple[float, float]:
    out = apply_transform(t, [tuple(point) if not hasattr(point, "u") else (point.u, point.v)])
    return float(out[0, 0]), float(out[0, 1])


def invert(t: CalibrationTransform) -> CalibrationTransform:
    """Exact analytic inverse (world → pixel) in the same parameter family."""
    m, offset = t.matrix()
    det = float(np.linalg.det(m))
    if abs(det) < 1e-300:
        raise NonInvertibleError("transform is singular")
    m_inv = np.linalg.inv(m)
    t_inv = -m_inv @ offset
    if t.kind == SIMILARITY:
        # the flipped-similarity family is closed under inversion
        s, theta, _, _ = t.coefficients
        if s <= 0:
            raise NonInvertibleError("similarity with non-positive scale")
        if t.flip:
            new = (1.0 / s, theta, float(t_inv[0]), float(t_inv[1]))
        else:
            new = (1.0 / s, -theta, float(t_inv[0]), float(t_inv[1]))
        return CalibrationTransform(kind=SIMILARITY, coefficients=new, flip=t.flip)
    coeffs = (
        float(m_inv[0, 0]),
        float(m_inv[0, 1]),
        float(m_inv[1, 0]),
        float(m_inv[1, 1]),
        float(t_inv[0]),
        float(t_inv[1]),
    )
    return CalibrationTransform(kind=AFFINE, coefficients=coeffs)


def rms_residual(t: CalibrationTransform, pixels, worlds) -> float:
    """√(mean squared world-space misfit) of the transform over control pairs."""
    px = as_point_array(pixels, min_points=1, name="pixel points")
    wd = as_point_array(worlds, min_points=1, name="world points")
    if px.shape != wd.shape:
        raise InvalidInputError("pixel and world point counts differ")
    pred = apply_transform(t, px)
    return float(np.sqrt(np.mean(np.sum((pred - wd) ** 2, axis=1))))


class PixelToWorldCalibrator(BaseEstimator):
    """sklearn-style wrapper: fit(pixels, worlds), transform(pixels).

    Parameters
    ----------
    kind : "similarity" (default) or "affine".
    """

    def __init__(self, kind: str = SIMILARITY):
        self.kind = kind

    def fit(self, X, y):
        pairs = [ControlPoint(pixel=tuple(p), world=tuple(w)) for p, w in zip(X, y)]
        self.transform_ = calibrate(pairs, kind=self.kind)
        self.rms_residual_ = self.transform_.rms_residual
        return self

    def transform(self, X) -> np.ndarray:
        return apply_transform(self.transform_, X)

    def inverse_transform(self, X) -> np.ndarray:
        return apply_transform(invert(self.transform_), X)
