import numpy as np
import pytest

from cartometer.calibration import (
    AFFINE,
    IDENTITY,
    SIMILARITY,
    CalibrationTransform,
    ControlPoint,
    PixelToWorldCalibrator,
    apply_transform,
    calibrate,
    fit_affine,
    fit_similarity,
    invert,
    rms_residual,
)
from cartometer.errors import (
    DegenerateConfigurationError,
    InsufficientDataError,
    InvalidInputError,
    NonInvertibleError,
)


def random_similarity(rng) -> CalibrationTransform:
    return CalibrationTransform(
        kind=SIMILARITY,
        coefficients=(
            float(rng.uniform(0.01, 10.0)),
            float(rng.uniform(-np.pi, np.pi)),
            float(rng.uniform(-100, 100)),
            float(rng.uniform(-100, 100)),
        ),
    )


def random_affine(rng) -> CalibrationTransform:
    while True:
        a, b, c, d = rng.uniform(-3, 3, 4)
        if abs(a * d - b * c) > 0.1:
            break
    e, f = rng.uniform(-100, 100, 2)
    return CalibrationTransform(kind=AFFINE, coefficients=tuple(map(float, (a, b, c, d, e, f))))


def angles_close(x, y, tol):
    return abs((x - y + np.pi) % (2 * np.pi) - np.pi) < tol


class TestFitSimilarity:
    def test_round_trip_known_transform(self):
        truth = CalibrationTransform(kind=SIMILARITY, coefficients=(0.05, 0.0, 3.0, 7.0))
        rng = np.random.default_rng(1)
        px = rng.uniform(0, 1000, (8, 2))
        wd = apply_transform(truth, px)
        fit = fit_similarity(px, wd)
        assert np.allclose(fit.coefficients, truth.coefficients, atol=1e-9)
        assert fit.rms_residual < 1e-9

    def test_identity_scale_two_pairs(self):
        fit = fit_similarity([(0, 0), (1, 0)], [(0, 0), (1, 0)])
        s, theta, tx, ty = fit.coefficients
        assert s == pytest.approx(1.0, abs=1e-12)
        assert theta == pytest.approx(0.0, abs=1e-12)
        assert fit.flip

    def test_random_ground_truth_recovery(self):
        rng = np.random.default_rng(12)
        for _ in range(100):
            truth = random_similarity(rng)
            px = rng.uniform(-500, 500, (int(rng.integers(2, 10)), 2))
            if np.hypot(*(px[-1] - px[0])) < 1.0:
                continue
            wd = apply_transform(truth, px)
            fit = fit_similarity(px, wd)
            s, th, tx, ty = fit.coefficients
            s0, th0, tx0, ty0 = truth.coefficients
            assert abs(s - s0) < 1e-9 * max(1, s0)
            assert angles_close(th, th0, 1e-9)
            assert abs(tx - tx0) < 1e-6 and abs(ty - ty0) < 1e-6
            assert fit.rms_residual < 1e-9

    def test_perturbed_pair_residual_bounded(self):
        px = [(0, 0), (100, 0), (0, 100)]
        truth = CalibrationTransform(kind=SIMILARITY, coefficients=(0.05, 0.0, 0.0, 0.0))
        wd = apply_transform(truth, px)
        wd[2] += (0.1, 0.0)
        fit = fit_similarity(px, wd)
        assert 0 < fit.rms_residual <= 0.1

    def test_insufficient_pairs(self):
        with pytest.raises(InsufficientDataError):
            fit_similarity([(0, 0)], [(0, 0)])

    def test_coincident_pixels_degenerate(self):
        with pytest.raises(DegenerateConfigurationError):
            fit_similarity([(5, 5), (5, 5)], [(0, 0), (1, 1)])


class TestFitAffine:
    def test_three_exact_pairs(self):
        rng = np.random.default_rng(3)
        truth = random_affine(rng)
        px = np.array([(0, 0), (100, 0), (0, 100)], dtype=float)
        wd = apply_transform(truth, px)
        fit = fit_affine(px, wd)
        assert fit.rms_residual < 1e-9
        assert np.allclose(apply_transform(fit, px), wd, atol=1e-9)

    def test_anisotropic_recovery(self):
        truth = CalibrationTransform(
            kind=AFFINE, coefficients=(0.05, 0.0, 0.0, -0.08, 2.0, 5.0)
        )
        rng = np.random.default_rng(4)
        px = rng.uniform(0, 1000, (10, 2))
        fit = fit_affine(px, apply_transform(truth, px))
        assert np.allclose(fit.coefficients, truth.coefficients, atol=1e-9)

    def test_displaced_fourth_pair(self):
        truth = CalibrationTransform(kind=AFFINE, coefficients=(0.05, 0, 0, -0.05, 0, 0))
        px = np.array([(0, 0), (100, 0), (0, 100), (100, 100)], dtype=float)
        wd = apply_transform(truth, px)
        wd[3] += (1.0, 0.0)
        fit = fit_affine(px, wd)
        assert 0 < fit.rms_residual <= 1.0

    def test_insufficient_pairs(self):
        with pytest.raises(InsufficientDataError):
            fit_affine([(0, 0), (1, 1)], [(0, 0), (1, 1)])

    def test_collinear_degenerate(self):
        with pytest.raises(DegenerateConfigurationError):
            fit_affine([(0, 0), (1, 1), (2, 2)], [(0, 0), (1, 0), (2, 0)])

    def test_affine_residual_at_most_similarity(self):
        rng = np.random.default_rng(5)
        for _ in range(50):
            px = rng.uniform(0, 1000, (6, 2))
            wd = rng.uniform(-50, 50, (6, 2))
            if np.linalg.svd(px - px.mean(0), compute_uv=False)[1] < 1.0:
                continue
            sim = fit_similarity(px, wd)
            aff = fit_affine(px, wd)
            assert aff.rms_residual <= sim.rms_residual + 1e-12


class TestApplyInvert:
    def test_identity_flip_convention(self):
        out = apply_transform(IDENTITY, [(5, 2)])
        assert out[0] == pytest.approx([5.0, -2.0])

    def test_scale_only(self):
        t = CalibrationTransform(kind=SIMILARITY, coefficients=(0.05, 0.0, 0.0, 0.0))
        assert apply_transform(t, [(100, 0)])[0] == pytest.approx([5.0, 0.0])

    def test_identity_inverse(self):
        inv = invert(IDENTITY)
        assert inv.coefficients == pytest.approx(IDENTITY.coefficients)

    def test_scale_two_inverse_half(self):
        t = CalibrationTransform(kind=SIMILARITY, coefficients=(2.0, 0.3, 1.0, -4.0))
        assert invert(t).coefficients[0] == pytest.approx(0.5)

    def test_apply_invert_round_trip(self):
        rng = np.random.default_rng(6)
        pts = rng.uniform(-100, 100, (20, 2))
        for make in (random_similarity, random_affine):
            for _ in range(20):
                t = make(rng)
                back = apply_transform(invert(t), apply_transform(t, pts))
                assert np.allclose(back, pts, atol=1e-9)

    def test_double_inverse(self):
        rng = np.random.default_rng(7)
        for make in (random_similarity, random_affine):
            t = make(rng)
            tt = invert(invert(t))
            assert np.allclose(tt.coefficients, t.coefficients, atol=1e-9)

    def test_singular_affine_rejected(self):
        t = CalibrationTransform(kind=AFFINE, coefficients=(1, 2, 2, 4, 0, 0))
        with pytest.raises(NonInvertibleError):
            invert(t)


class TestRmsResidual:
    def test_exact_pairs_zero(self):
        t = CalibrationTransform(kind=SIMILARITY, coefficients=(0.05, 0.1, 3, 7))
        px = np.array([(0, 0), (10, 20), (30, 5)], dtype=float)
        assert rms_residual(t, px, apply_transform(t, px)) == 0.0

    def test_single_displacement(self):
        px = np.array([(0, 0), (10, 0), (0, 10), (10, 10)], dtype=float)
        wd = apply_transform(IDENTITY, px)
        wd[0] += (0.4, 0.0)
        assert rms_residual(IDENTITY, px, wd) == pytest.approx(0.4 / 2.0)

    def test_empty_rejected(self):
        with pytest.raises(InvalidInputError):
            rms_residual(IDENTITY, [], [])

    def test_least_squares_optimality(self):
        rng = np.random.default_rng(8)
        px = rng.uniform(0, 500, (8, 2))
        wd = rng.uniform(-20, 20, (8, 2))
        fit = fit_similarity(px, wd)
        best = fit.rms_residual
        s, th, tx, ty = fit.coefficients
        for _ in range(1000):
            cand = CalibrationTransform(
                kind=SIMILARITY,
                coefficients=(
                    abs(s + rng.normal(0, 0.01)),
                    th + rng.normal(0, 0.01),
                    tx + rng.normal(0, 0.1),
                    ty + rng.normal(0, 0.1),
                ),
            )
            assert best <= rms_residual(cand, px, wd) + 1e-12


class TestEstimator:
    def test_fit_transform(self):
        cal = PixelToWorldCalibrator()
        px = [(0, 0), (100, 0)]
        wd = [(0, 0), (5, 0)]
        assert cal.fit(px, wd).transform([(50, 0)])[0] == pytest.approx([2.5, 0.0])
        assert cal.rms_residual_ < 1e-12

    def test_inverse_transform(self):
        cal = PixelToWorldCalibrator(kind="affine").fit(
            [(0, 0), (100, 0), (0, 100)], [(0, 0), (5, 0), (0, -8)]
        )
        back = cal.inverse_transform(cal.transform([(30, 40)]))
        assert back[0] == pytest.approx([30.0, 40.0])

    def test_get_params(self):
        assert PixelToWorldCalibrator(kind="affine").get_params() == {"kind": "affine"}


def test_calibrate_dispatch():
    pairs = [
        ControlPoint(pixel=(0, 0), world=(0, 0)),
        ControlPoint(pixel=(100, 0), world=(1, 0)),
    ]
    t = calibrate(pairs)
    assert t.kind == SIMILARITY
    with pytest.raises(InvalidInputError):
        calibrate(pairs, kind="projective")
