import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from companion_bounds.ellipsoid import Ellipsoid, ellipsoid_affine_transform
from companion_bounds.errors import InvalidInputError
from companion_bounds.geometry import (
    contains, convex_hull, ellipsoid_measure, measure, monotone_chain, polytope_measure,
    relative_violation, unit_ball_measure,
)

seeds = st.integers(0, 2**32 - 1)


def test_square_with_center():
    pts = np.array([[0, 0], [1, 0], [1, 1], [0, 1], [0.5, 0.5], [0.5, 0.0]])
    hull = convex_hull(pts)
    assert len(hull.vertices) == 4 and not hull.degenerate
    assert polytope_measure(hull) == pytest.approx(1.0)
    # counter-clockwise orientation in local coordinates
    y = hull.local_vertices
    signed = 0.5 * np.sum(y[:, 0] * np.roll(y[:, 1], -1) - y[:, 1] * np.roll(y[:, 0], -1))
    assert signed > 0


def test_collinear_points_are_degenerate():
    hull = convex_hull([[0, 0], [1, 1], [2, 2], [0.5, 0.5]])
    assert hull.degenerate and hull.affine_dim == 1
    assert polytope_measure(hull) == 0.0
    assert contains(hull, [1.5, 1.5])
    assert not contains(hull, [1.5, 1.6])
    assert not contains(hull, [2.5, 2.5])


def test_single_point_and_errors():
    hull = convex_hull([[1.0, 2.0, 3.0]] * 3)
    assert hull.affine_dim == 0
    assert contains(hull, [1.0, 2.0, 3.0]) and not contains(hull, [1.0, 2.0, 3.1])
    with pytest.raises(InvalidInputError):
        convex_hull(np.zeros((0, 2)))
    with pytest.raises(InvalidInputError):
        convex_hull(np.zeros((3, 4)))
    with pytest.raises(InvalidInputError):
        convex_hull([[np.nan, 0.0]])


def test_triangle_and_cube():
    assert polytope_measure(convex_hull([[0, 0], [1, 0], [0, 1]])) == pytest.approx(0.5)
    cube = np.array(list(itertools.product([0.0, 1.0], repeat=3)))
    hull = convex_hull(np.vstack([cube, [[0.5, 0.5, 0.5]]]))
    assert len(hull.vertices) == 8
    assert polytope_measure(hull) == pytest.approx(1.0)


def test_flat_triangle_in_space():
    hull = convex_hull([[0, 0, 0], [1, 0, 0], [0, 1, 0]])
    assert hull.degenerate and hull.affine_dim == 2
    assert measure(hull) == 0.0
    assert contains(hull, [0.2, 0.2, 0.0])
    assert not contains(hull, [0.2, 0.2, 1e-3])
    assert not contains(hull, [0.8, 0.8, 0.0])


@given(seeds)
def test_random_simplex_volume_matches_determinant(seed):
    pts = np.random.default_rng(seed).normal(size=(4, 3))
    ref = abs(np.linalg.det(pts[1:] - pts[0])) / 6
    assert polytope_measure(convex_hull(pts)) == pytest.approx(ref, rel=1e-10)


@given(seeds, st.sampled_from([2, 3]))
def test_random_points_inside_hull(seed, d):
    pts = np.random.default_rng(seed).normal(size=(50, d))
    hull = convex_hull(pts)
    assert np.all(contains(hull, pts, 1e-9))
    far = pts.mean(axis=0) + 2 * np.ptp(pts, axis=0).max() * np.eye(d)[0]
    assert not contains(hull, far)
    assert contains(hull, pts.mean(axis=0))


@given(seeds, st.sampled_from([2, 3]))
def test_measure_monotone_in_point_set(seed, d):
    rng = np.random.default_rng(seed)
    pts = rng.normal(size=(30, d))
    sub = pts[: 10 + d]
    assert polytope_measure(convex_hull(pts)) >= polytope_measure(convex_hull(sub)) * (1 - 1e-12)


@given(seeds)
def test_hull_volume_matches_scipy(seed):
    from scipy.spatial import ConvexHull

    pts = np.random.default_rng(seed).uniform(-1, 1, size=(25, 3))
    assert polytope_measure(convex_hull(pts)) == pytest.approx(ConvexHull(pts).volume, rel=1e-10)
    pts2 = pts[:, :2]
    hull2 = convex_hull(pts2)
    assert polytope_measure(hull2) == pytest.approx(ConvexHull(pts2).volume, rel=1e-10)
    assert sorted(map(tuple, hull2.vertices)) == sorted(map(tuple, pts2[ConvexHull(pts2).vertices]))


def test_monotone_chain_drops_collinear():
    pts = np.array([[0, 0], [1, 0], [2, 0], [2, 2], [0, 2], [1, 2], [0, 1]], dtype=float)
    idx = monotone_chain(pts, 1e-12)
    assert sorted(idx) == [0, 2, 3, 4]


def test_ellipsoid_measures():
    assert ellipsoid_measure(Ellipsoid(np.zeros(2), np.eye(2), 1.0)) == pytest.approx(math.pi)
    assert ellipsoid_measure(Ellipsoid(np.zeros(2), np.diag([4.0, 9.0]), 1.0)) == pytest.approx(6 * math.pi)
    assert ellipsoid_measure(Ellipsoid(np.zeros(3), np.eye(3), 2.0)) == pytest.approx(4 / 3 * math.pi * 8)
    assert ellipsoid_measure(Ellipsoid(np.zeros(2), np.diag([1.0, 0.0]), 1.0)) == 0.0
    assert unit_ball_measure(1) == pytest.approx(2.0)


@settings(max_examples=10)
@given(seeds, st.sampled_from([2, 3]))
def test_ellipsoid_measure_monte_carlo(seed, d):
    rng = np.random.default_rng(seed)
    U, _ = np.linalg.qr(rng.normal(size=(d, d)))
    Q = U @ np.diag(rng.uniform(0.3, 2.0, d)) @ U.T
    E = Ellipsoid(rng.normal(size=d), Q, rng.uniform(0.5, 1.5))
    half = E.radius * np.sqrt(np.diag(Q))
    box = rng.uniform(E.center - half, E.center + half, size=(100_000, d))
    frac = np.mean(E.contains(box, 1e-12))
    assert ellipsoid_measure(E) == pytest.approx(frac * np.prod(2 * half), rel=0.02)


@given(seeds, st.sampled_from([2, 3]))
def test_ellipsoid_measure_scales_with_determinant(seed, d):
    rng = np.random.default_rng(seed)
    E = Ellipsoid(np.zeros(d), np.eye(d) + 0.1 * np.ones((d, d)), 1.3)
    A = rng.normal(size=(d, d))
    out = ellipsoid_affine_transform(E, A, rng.normal(size=d))
    assert ellipsoid_measure(out) == pytest.approx(abs(np.linalg.det(A)) * ellipsoid_measure(E), rel=1e-8)


def test_relative_violation_is_scale_free():
    tri = np.array([[0, 0], [1, 0], [0, 1]])
    v1 = relative_violation(convex_hull(1e6 * tri), [1e6, 1e6])
    v2 = relative_violation(convex_hull(1e9 * tri), [1e9, 1e9])
    assert v1 == pytest.approx(v2, rel=1e-5)
    hull = convex_hull(tri)
    assert relative_violation(hull, [0.2, 0.2]) < 0
