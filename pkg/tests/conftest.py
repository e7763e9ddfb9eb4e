from __future__ import annotations

import shutil
from pathlib import Path

import numpy as np
import pytest

GOLDEN_DIR = Path(__file__).parent / "golden"


@pytest.fixture
def golden_dir() -> Path:
    return GOLDEN_DIR


@pytest.fixture
def session_copy(tmp_path):
    """Copy a golden session into tmp and return its path."""

    def _copy(name: str) -> Path:
        dst = tmp_path / name
        shutil.copy(GOLDEN_DIR / name, dst)
        return dst

    return _copy


def random_star_polygon(rng: np.random.Generator, n_max: int = 40):
    """A random simple polygon plus its kernel point.

    Vertices sit at distinct sorted angles around the kernel, so the polygon
    is star-shaped (hence simple) and fan triangulation from the kernel is a
    genuine triangulation.
    """
    n = int(rng.integers(5, n_max + 1))
    gaps = rng.uniform(0.1, 1.0, n)
    angles = 2.0 * np.pi * np.cumsum(gaps) / gaps.sum()
    radii = rng.uniform(0.5, 5.0, n)
    center = rng.uniform(-10.0, 10.0, 2)
    verts = center + radii[:, None] * np.column_stack([np.cos(angles), np.sin(angles)])
    return verts, center


def fan_triangulation_area(vertices: np.ndarray, kernel: np.ndarray) -> float:
    """Sum of unsigned fan-triangle areas; an area oracle for star-shaped polygons."""
    total = 0.0
    n = vertices.shape[0]
    for i in range(n):
        a = vertices[i] - kernel
        b = vertices[(i + 1) % n] - kernel
        total += abs(a[0] * b[1] - a[1] * b[0]) / 2.0
    return total
