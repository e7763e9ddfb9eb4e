import numpy as np
import pytest

from cartometer.errors import InvalidInputError
from cartometer.geometry import (
    BoundingBox,
    bounding_box,
    dedupe_consecutive,
    is_simple,
    polygon_area,
    polyline_length,
    strip_closing_vertex,
)

from conftest import fan_triangulation_area, random_star_polygon


class TestPolylineLength:
    def test_three_four_five(self):
        assert polyline_length([(0, 0), (3, 4)]) == pytest.approx(5.0)

    def test_single_point(self):
        assert polyline_length([(7, 2)]) == 0.0

    def test_unit_steps(self):
        assert polyline_length([(0, 0), (1, 0), (1, 1), (0, 1)]) == pytest.approx(3.0)

    def test_empty_rejected(self):
        with pytest.raises(InvalidInputError):
            polyline_length([])

    def test_duplicate_consecutive_rejected(self):
        with pytest.raises(InvalidInputError):
            polyline_length([(0, 0), (0, 0), (1, 1)])

    def test_rigid_motion_invariance(self):
        rng = np.random.default_rng(1)
        pts = rng.uniform(-5, 5, (10, 2))
        base = polyline_length(pts)
        for _ in range(50):
            theta = rng.uniform(0, 2 * np.pi)
            rot = np.array(
                [[np.cos(theta), -np.sin(theta)], [np.sin(theta), np.cos(theta)]]
            )
            moved = pts @ rot.T + rng.uniform(-100, 100, 2)
            assert abs(polyline_length(moved) - base) < 1e-9

    def test_scaling(self):
        pts = [(0, 0), (1, 2), (3, 1)]
        base = polyline_length(pts)
        for s in (0.5, 2, 10):
            scaled = [(s * x, s * y) for x, y in pts]
            assert polyline_length(scaled) == pytest.approx(s * base, rel=1e-12)


class TestPolygonArea:
    def test_unit_square(self):
        assert polygon_area([(0, 0), (1, 0), (1, 1), (0, 1)]) == pytest.approx(1.0)

    def test_half_box_triangle(self):
        assert polygon_area([(0, 0), (4.2, 0), (0, 3.1)]) == pytest.approx(6.51)

    def test_too_few_vertices(self):
        with pytest.raises(InvalidInputError):
            polygon_area([(0, 0), (1, 1)])

    def test_matches_triangulation_oracle(self):
        rng = np.random.default_rng(42)
        for _ in range(300):
            verts, kernel = random_star_polygon(rng)
            expected = fan_triangulation_area(verts, kernel)
            assert polygon_area(verts) == pytest.approx(expected, rel=1e-9)

    def test_cyclic_rotation_and_reversal_invariance(self):
        rng = np.random.default_rng(3)
        verts, _ = random_star_polygon(rng)
        base = polygon_area(verts)
        for k in range(1, verts.shape[0]):
            assert polygon_area(np.roll(verts, k, axis=0)) == pytest.approx(base)
        assert polygon_area(verts[::-1]) == pytest.approx(base)

    def test_scaling_squares_area(self):
        verts = [(0, 0), (3, 0), (2, 2), (0, 1)]
        base = polygon_area(verts)
        for s in (0.5, 2, 10):
            scaled = [(s * x, s * y) for x, y in verts]
            assert polygon_area(scaled) == pytest.approx(s * s * base, rel=1e-12)

    def test_area_bounded_by_bbox(self):
        rng = np.random.default_rng(11)
        for _ in range(300):
            verts, _ = random_star_polygon(rng)
            assert polygon_area(verts) <= bounding_box(verts).area * (1 + 1e-12)

    def test_closing_vertex_stripped(self):
        square = [(0, 0), (1, 0), (1, 1), (0, 1), (0, 0)]
        assert polygon_area(square) == pytest.approx(1.0)


class TestBoundingBox:
    def test_paper_rectangle(self):
        box = bounding_box([(0, 0), (4.2, 0), (4.2, 3.1), (0, 3.1)])
        assert box.area == pytest.approx(13.02)

    def test_single_point(self):
        assert bounding_box([(7, -2)]) == BoundingBox(0.0, 0.0, 0.0)

    def test_triangle_extents(self):
        box = bounding_box([(0, 0), (4.2, 0), (0, 3.1)])
        assert (box.width, box.height) == (pytest.approx(4.2), pytest.approx(3.1))
        assert box.area == pytest.approx(13.02)

    def test_empty_rejected(self):
        with pytest.raises(InvalidInputError):
            bounding_box([])


class TestIsSimple:
    def test_square_simple(self):
        assert is_simple([(0, 0), (1, 0), (1, 1), (0, 1)])

    def test_bowtie_not_simple(self):
        assert not is_simple([(0, 0), (1, 1), (1, 0), (0, 1)])

    def test_convex_hulls_simple(self):
        from scipy.spatial import ConvexHull

        rng = np.random.default_rng(5)
        for _ in range(50):
            cloud = rng.uniform(-10, 10, (int(rng.integers(6, 30)), 2))
            hull = ConvexHull(cloud)
            assert is_simple(cloud[hull.vertices])

    def test_star_polygons_simple(self):
        rng = np.random.default_rng(9)
        for _ in range(100):
            verts, _ = random_star_polygon(rng)
            assert is_simple(verts)


class TestHelpers:
    def test_dedupe_consecutive(self):
        out = dedupe_consecutive([(0, 0), (0, 0), (1, 0), (1, 0), (1, 0), (2, 0)])
        assert out.shape == (3, 2)

    def test_strip_closing_only_when_closed(self):
        assert strip_closing_vertex([(0, 0), (1, 0), (0, 0)]).shape == (2, 2)
        assert strip_closing_vertex([(0, 0), (1, 0), (2, 0)]).shape == (3, 2)
