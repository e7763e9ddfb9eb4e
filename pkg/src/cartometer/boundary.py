"""Continuous boundary fitting: periodic trigonometric least squares.

A traced frontier is a discontinuous chain of clicks. Fitting a truncated
Fourier series per coordinate turns it into a closed smooth curve

    x(t) = a0 + Σₖ aₖ cos kt + bₖ sin kt
    y(t) = c0 + Σₖ cₖ cos kt + dₖ sin kt,   t ∈ [0, 2π)

that can be resampled at any resolution and whose enclosed area has a
closed form (Green's theorem).

Vertices are parameterized by cumulative chord length over the closed
perimeter, so the fit does not depend on click cadence.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
from sklearn.base import BaseEstimator

from .errors import DegenerateConfigurationError, InsufficientDataError, InvalidInputError
from .geometry import strip_closing_vertex
from .validation import as_point_array


@dataclass(frozen=True)
class FourierBoundary:
    """Closed periodic curve with n harmonics per coordinate, in km."""

    a0: float
    c0: float
    a: tuple[float, ...]
    b: tuple[float, ...]
    c: tuple[float, ...]
    d: tuple[float, ...]

    def __post_init__(self):
        n = len(self.a)
        if n < 1 or any(len(v) != n for v in (self.b, self.c, self.d)):
            raise InvalidInputError("coefficient arrays must share length n >= 1")
        values = (self.a0, self.c0, *self.a, *self.b, *self.c, *self.d)
        if not all(np.isfinite(values)):
            raise InvalidInputError("boundary coefficients must be finite")

    @property
    def n(self) -> int:
        return len(self.a)


@dataclass(frozen=True)
class FitReport:
    boundary: FourierBoundary
    rms_error: float
    area: float


def default_harmonics(vertex_count: int) -> int:
    """Default n: well-overdetermined for the given trace density."""
    return max(1, min(8, vertex_count // 4))


def _chord_parameters(vertices: np.ndarray) -> np.ndarray:
    closed = np.vstack([vertices, vertices[0]])
    seg = np.hypot(*(np.diff(closed, axis=0).T))
    perimeter = seg.sum()
    if perimeter <= 0:
        raise DegenerateConfigurationError("zero-perimeter boundary")
    cum = np.concatenate([[0.0], np.cumsum(seg[:-1])])
    return 2.0 * np.pi * cum / perimeter


def _design(t: np.ndarray, n: int) -> np.ndarray:
    k = np.arange(1, n + 1)
    kt = np.outer(t, k)
    return np.hstack([np.ones((t.size, 1)), np.cos(kt), np.sin(kt)])


def evaluate_boundary(b: FourierBoundary, t) -> np.ndarray:
    """Curve points at parameter values t; returns an (len(t), 2) array."""
    t = np.atleast_1d(np.asarray(t, dtype=np.float64))
    design = _design(t, b.n)
    cx = np.concatenate([[b.a0], b.a, b.b])
    cy = np.concatenate([[b.c0], b.c, b.d])
    return np.column_stack([design @ cx, design @ cy])


def fit_fourier_boundary(vertices, n: Optional[int] = None) -> FitReport:
    """Least-squares Fourier boundary through a closed vertex chain.

    Requires at least max(3, 2n+1) vertices so the per-coordinate linear
    system is square or overdetermined. Solved via orthogonal decomposition
    (numpy lstsq), x and y independently on a shared chord-length grid.
    """
    raw = as_point_array(vertices, min_points=1, name="vertices")
    if float(np.ptp(raw, axis=0).max()) <= 0.0:
        raise DegenerateConfigurationError("zero-perimeter boundary")
    arr = strip_closing_vertex(raw)
    if n is None:
        n = default_harmonics(arr.shape[0])
    if n < 1:
        raise InvalidInputError(f"harmonic count must be >= 1, got {n}")
    if arr.shape[0] < max(3, 2 * n + 1):
        raise InsufficientDataError(
            f"{arr.shape[0]} vertices cannot constrain n={n} harmonics "
            f"(need >= {max(3, 2 * n + 1)})"
        )
    t = _chord_parameters(arr)
    design = _design(t, n)
    cx, *_ = np.linalg.lstsq(design, arr[:, 0], rcond=None)
    cy, *_ = np.linalg.lstsq(design, arr[:, 1], rcond=None)
    boundary = FourierBoundary(
        a0=float(cx[0]),
        c0=float(cy[0]),
        a=tuple(cx[1 : n + 1]),
        b=tuple(cx[n + 1 :]),
        c=tuple(cy[1 : n + 1]),
        d=tuple(cy[n + 1 :]),
    )
    fitted = evaluate_boundary(boundary, t)
    rms = float(np.sqrt(np.mean(np.sum((fitted - arr) ** 2, axis=1))))
    return FitReport(boundary=boundary, rms_error=rms, area=fourier_area(boundary))


def fourier_area(b: FourierBoundary) -> float:
    """Enclosed area in km², closed form: |π·Σₖ k·(aₖdₖ − bₖcₖ)|."""
    k = np.arange(1, b.n + 1)
    a, bb, c, d = (np.asarray(v) for v in (b.a, b.b, b.c, b.d))
    return float(abs(np.pi * np.sum(k * (a * d - bb * c))))


def sample_boundary(b: FourierBoundary, m: int) -> np.ndarray:
    """m curve points at uniform parameters t = 2πj/m, j = 0..m−1."""
    if m < 3:
        raise InvalidInputError(f"need at least 3 samples, got {m}")
    t = 2.0 * np.pi * np.arange(m) / m
    return evaluate_boundary(b, t)


def fit_error_curve(vertices, n_max: int) -> list[tuple[int, float, float]]:
    """(n, rms_error, area) for n = 1..n_max, capped where vertices run out."""
    if n_max < 1:
        raise InvalidInputError(f"n_max must be >= 1, got {n_max}")
    arr = strip_closing_vertex(as_point_array(vertices, min_points=3, name="vertices"))
    cap = min(n_max, (arr.shape[0] - 1) // 2)
    rows = []
    for n in range(1, cap + 1):
        report = fit_fourier_boundary(arr, n)
        rows.append((n, report.rms_error, report.area))
    if not rows:
        raise InsufficientDataError("too few vertices for even one harmonic")
    return rows


class FourierBoundaryFitter(BaseEstimator):
    """sklearn-style wrapper: fit(vertices), then sample(m) / attributes.

    Parameters
    ----------
    n_harmonics : harmonic count, or None for the vertex-count default.
    """

    def __init__(self, n_harmonics: Optional[int] = None):
        self.n_harmonics = n_harmonics

    def fit(self, X, y=None):
        report = fit_fourier_boundary(X, self.n_harmonics)
        self.boundary_ = report.boundary
        self.rms_error_ = report.rms_error
        self.area_ = report.area
        return self

    def sample(self, m: int) -> np.ndarray:
        return sample_boundary(self.boundary_, m)
