import numpy as np
import pytest

from cartometer.boundary import (
    FourierBoundary,
    FourierBoundaryFitter,
    default_harmonics,
    evaluate_boundary,
    fit_error_curve,
    fit_fourier_boundary,
    fourier_area,
    sample_boundary,
)
from cartometer.errors import (
    DegenerateConfigurationError,
    InsufficientDataError,
    InvalidInputError,
)
from cartometer.geometry import polygon_area


def circle_points(r=2.0, cx=5.0, cy=5.0, m=64):
    t = 2 * np.pi * np.arange(m) / m
    return np.column_stack([cx + r * np.cos(t), cy + r * np.sin(t)])


def random_boundary(rng, n_max=6) -> FourierBoundary:
    n = int(rng.integers(1, n_max + 1))
    k = np.arange(1, n + 1)
    scale = 1.0 / (k * k)
    return FourierBoundary(
        a0=float(rng.uniform(-10, 10)),
        c0=float(rng.uniform(-10, 10)),
        a=tuple(rng.normal(0, 3, n) * scale),
        b=tuple(rng.normal(0, 3, n) * scale),
        c=tuple(rng.normal(0, 3, n) * scale),
        d=tuple(rng.normal(0, 3, n) * scale),
    )


def quadrature_area(b: FourierBoundary, m=10_000) -> float:
    """Independent oracle: trapezoid quadrature of (1/2)∮(x dy − y dx).

    Re-evaluates the series directly and differentiates term by term.
    """
    t = 2 * np.pi * np.arange(m) / m
    k = np.arange(1, len(b.a) + 1)
    kt = np.outer(t, k)
    cos_kt, sin_kt = np.cos(kt), np.sin(kt)
    a, bb, c, d = (np.asarray(v) for v in (b.a, b.b, b.c, b.d))
    x = b.a0 + cos_kt @ a + sin_kt @ bb
    y = b.c0 + cos_kt @ c + sin_kt @ d
    dx = (-sin_kt * k) @ a + (cos_kt * k) @ bb
    dy = (-sin_kt * k) @ c + (cos_kt * k) @ d
    return abs(0.5 * np.sum(x * dy - y * dx) * (2 * np.pi / m))


class TestFit:
    def test_circle_is_one_harmonic(self):
        report = fit_fourier_boundary(circle_points(), 1)
        b = report.boundary
        assert b.a0 == pytest.approx(5.0, abs=1e-6)
        assert b.c0 == pytest.approx(5.0, abs=1e-6)
        assert b.a[0] == pytest.approx(2.0, abs=1e-6)
        assert b.d[0] == pytest.approx(2.0, abs=1e-6)
        assert abs(b.b[0]) < 1e-6 and abs(b.c[0]) < 1e-6
        assert report.rms_error < 1e-6

    def test_square_not_one_harmonic(self):
        report = fit_fourier_boundary([(0, 0), (1, 0), (1, 1), (0, 1)], 1)
        assert report.rms_error > 0

    def test_rms_non_increasing_in_n(self):
        rng = np.random.default_rng(10)
        for _ in range(10):
            b = random_boundary(rng)
            verts = sample_boundary(b, 40) + rng.normal(0, 0.05, (40, 2))
            previous = None
            for n in range(1, 10):
                rms = fit_fourier_boundary(verts, n).rms_error
                if previous is not None:
                    assert rms <= previous + 1e-12
                previous = rms

    def test_too_few_vertices_for_n(self):
        with pytest.raises(InsufficientDataError):
            fit_fourier_boundary(circle_points(m=6), 3)

    def test_zero_perimeter(self):
        with pytest.raises(DegenerateConfigurationError):
            fit_fourier_boundary([(1, 1), (1, 1), (1, 1)], 1)

    def test_translation_equivariance(self):
        verts = circle_points(m=30) + np.random.default_rng(11).normal(0, 0.1, (30, 2))
        base = fit_fourier_boundary(verts, 4).boundary
        shifted = fit_fourier_boundary(verts + [13.0, -7.0], 4).boundary
        assert shifted.a0 - base.a0 == pytest.approx(13.0, abs=1e-9)
        assert shifted.c0 - base.c0 == pytest.approx(-7.0, abs=1e-9)
        for field in ("a", "b", "c", "d"):
            assert np.allclose(getattr(shifted, field), getattr(base, field), atol=1e-9)

    def test_default_harmonics(self):
        assert default_harmonics(64) == 8
        assert default_harmonics(20) == 5
        assert default_harmonics(4) == 1


class TestFourierArea:
    def test_circle_closed_form(self):
        b = FourierBoundary(a0=0, c0=0, a=(3.0,), b=(0.0,), c=(0.0,), d=(3.0,))
        assert fourier_area(b) == pytest.approx(np.pi * 9.0)

    def test_point_boundary(self):
        b = FourierBoundary(a0=4, c0=2, a=(0.0,), b=(0.0,), c=(0.0,), d=(0.0,))
        assert fourier_area(b) == 0.0

    def test_matches_quadrature_oracle(self):
        rng = np.random.default_rng(12)
        for _ in range(100):
            b = random_boundary(rng)
            closed = fourier_area(b)
            quad = quadrature_area(b)
            if quad > 1e-9:
                assert closed == pytest.approx(quad, rel=1e-6)

    def test_phase_shift_invariance(self):
        rng = np.random.default_rng(13)
        for _ in range(20):
            b = random_boundary(rng)
            phi = rng.uniform(0, 2 * np.pi)
            k = np.arange(1, len(b.a) + 1)
            cs, sn = np.cos(k * phi), np.sin(k * phi)
            a, bb, c, d = (np.asarray(v) for v in (b.a, b.b, b.c, b.d))
            shifted = FourierBoundary(
                a0=b.a0,
                c0=b.c0,
                a=tuple(a * cs + bb * sn),
                b=tuple(bb * cs - a * sn),
                c=tuple(c * cs + d * sn),
                d=tuple(d * cs - c * sn),
            )
            assert fourier_area(shifted) == pytest.approx(fourier_area(b), rel=1e-9)


class TestSampling:
    def test_circle_cardinal_points(self):
        b = FourierBoundary(a0=0, c0=0, a=(2.0,), b=(0.0,), c=(0.0,), d=(2.0,))
        pts = sample_boundary(b, 4)
        assert np.allclose(pts, [(2, 0), (0, 2), (-2, 0), (0, -2)], atol=1e-12)

    def test_too_few_samples(self):
        b = FourierBoundary(a0=0, c0=0, a=(1.0,), b=(0.0,), c=(0.0,), d=(1.0,))
        with pytest.raises(InvalidInputError):
            sample_boundary(b, 2)

    def test_shoelace_converges_to_closed_form(self):
        rng = np.random.default_rng(14)
        for _ in range(10):
            b = random_boundary(rng)
            closed = fourier_area(b)
            if closed < 1e-6:
                continue
            assert polygon_area(sample_boundary(b, 10_000)) == pytest.approx(
                closed, rel=1e-4
            )

    def test_sample_grids_nest(self):
        b = FourierBoundary(a0=1, c0=2, a=(2.0, 0.3), b=(0.1, 0.0), c=(0.0, 0.2), d=(2.0, 0.1))
        coarse = sample_boundary(b, 16)
        fine = sample_boundary(b, 32)
        assert np.allclose(coarse, fine[::2], atol=1e-12)


class TestErrorCurve:
    def test_circle_flat(self):
        rows = fit_error_curve(circle_points(), 5)
        assert len(rows) == 5
        assert all(rms < 1e-6 for _, rms, _ in rows)

    def test_dense_quad_strictly_decreasing(self):
        rng = np.random.default_rng(15)
        corners = np.array([(0.0, 0.2), (10.1, 0.0), (9.9, 10.3), (0.2, 9.8)])
        pts = []
        for i in range(4):
            a, b = corners[i], corners[(i + 1) % 4]
            for frac in np.linspace(0, 1, 6, endpoint=False):
                pts.append(a + frac * (b - a) + rng.normal(0, 0.05, 2))
        rows = fit_error_curve(np.array(pts), 8)
        rms = [r for _, r, _ in rows]
        assert len(rows) == 8
        assert all(rms[i + 1] < rms[i] for i in range(7))
        assert all(r > 0 for r in rms)

    def test_area_converges_to_shoelace(self):
        verts = circle_points(m=48)
        rows = fit_error_curve(verts, default_harmonics(48))
        assert rows[-1][2] == pytest.approx(polygon_area(verts), rel=1e-2)

    def test_caps_at_vertex_budget(self):
        rows = fit_error_curve(circle_points(m=9), 10)
        assert rows[-1][0] == 4  # (9 - 1) // 2

    def test_invalid_n_max(self):
        with pytest.raises(InvalidInputError):
            fit_error_curve(circle_points(), 0)


class TestEstimator:
    def test_fit_and_sample(self):
        fitter = FourierBoundaryFitter(n_harmonics=1).fit(circle_points())
        assert fitter.rms_error_ < 1e-6
        assert fitter.area_ == pytest.approx(np.pi * 4.0, rel=1e-6)
        assert fitter.sample(8).shape == (8, 2)

    def test_get_params(self):
        assert FourierBoundaryFitter(n_harmonics=3).get_params() == {"n_harmonics": 3}


def test_evaluate_matches_sample():
    b = FourierBoundary(a0=0, c0=0, a=(1.0,), b=(0.5,), c=(0.2,), d=(1.0,))
    t = 2 * np.pi * np.arange(6) / 6
    assert np.allclose(evaluate_boundary(b, t), sample_boundary(b, 6))
