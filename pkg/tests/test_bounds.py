import numpy as np
import pytest
from hypothesis import given

from companion_bounds.bounds import (
    SimplexBound, exponential_simplex, simplicial_bound, vandermonde_simplex, vandermonde_weights,
)
from companion_bounds.companion import exclude_max
from companion_bounds.errors import DomainError, InvalidInputError, SingularityError
from companion_bounds.geometry import convex_hull, relative_violation
from companion_bounds.trajectory import (
    default_horizon, exponential_coefficients, integrate_trajectory, substeps_for,
)

from conftest import roots_and_state


def rk4_positions(r, xi, grid=300):
    T = default_horizon(r)
    return integrate_trajectory(r, xi, T, grid, substeps_for(r, T, grid)).positions


def max_violation(bound, pts):
    return float(np.max(relative_violation(convex_hull(bound.vertices), pts)))


def test_vandermonde_second_order_example():
    p, v = np.array([0.3, -0.8]), np.array([1.1, 0.4])
    S = vandermonde_simplex([-1.0, -2.0], [p, v])
    np.testing.assert_allclose(S.vertices, [np.zeros(2), p, p + v / 2])
    assert S.kind == "vandermonde" and S.order == 2 and S.dim == 2


def test_vandermonde_third_order_example():
    p, v, a = np.eye(3)
    S = vandermonde_simplex([-1.0, -2.0, -3.0], [p, v, a])
    np.testing.assert_allclose(S.vertices, [np.zeros(3), p, p + 5 / 6 * v, p + 5 / 6 * v + a / 6])
    pts = rk4_positions(np.array([-1.0, -2.0, -3.0]), np.array([p, v, a]))
    assert max_violation(S, pts) <= 1e-9


def test_zero_state_degenerates():
    S = vandermonde_simplex([-1.0, -2.0], np.zeros((2, 2)))
    assert np.all(S.vertices == 0)
    assert convex_hull(S.vertices).affine_dim == 0
    assert np.all(exponential_simplex([-1.0, -2.0], np.zeros((2, 2))).vertices == 0)


def test_domain_errors():
    with pytest.raises(DomainError):
        vandermonde_simplex([-1.0, 0.0], np.ones((2, 1)))
    with pytest.raises(DomainError):
        vandermonde_simplex([-1 + 1j, -1 - 1j], np.ones((2, 1)))
    with pytest.raises(InvalidInputError):
        vandermonde_simplex([-1.0, -2.0], np.ones((3, 1)))
    with pytest.raises(SingularityError):
        exponential_simplex([-1.0, -1.0], np.ones((2, 1)))
    with pytest.raises(DomainError):
        simplicial_bound(np.ones((2, 1)), [1.0, 0.0])
    with pytest.raises(InvalidInputError):
        SimplexBound(np.zeros((2, 2)), kind="other")


def test_exponential_second_order():
    p, v = 0.4, -1.3
    S = exponential_simplex([-2.0, -1.0], [[p], [v]])
    w_fast, w_slow = -(p + v), 2 * p + v
    # slowest mode first, the last vertex is the full sum x0
    np.testing.assert_allclose(S.vertices[:, 0], [0.0, w_slow, w_slow + w_fast])
    assert S.vertices[-1, 0] == pytest.approx(p)
    assert S.meta["roots"] == [-1.0, -2.0]


def test_fastest_first_ordering_is_not_a_bound():
    # cumulative sums starting at the fastest mode miss part of this trajectory
    r = np.array([-2.0, -1.0])
    xi = np.array([[1.0, 0.0], [0.0, 1.0]])
    pts = rk4_positions(r, xi)
    coef = exponential_coefficients(r, xi)
    fastest_first = SimplexBound(np.vstack([np.zeros(2), np.cumsum(coef, axis=0)]))
    assert max_violation(fastest_first, pts) > 1e-3
    assert max_violation(exponential_simplex(r, xi), pts) <= 1e-9


@given(roots_and_state(max_n=5))
def test_generic_constructor_reproduces_vandermonde(case):
    r, xi = case
    _, coef = exclude_max(r)
    beta = coef[0] / coef
    S = simplicial_bound(xi, beta, kind="vandermonde")
    np.testing.assert_allclose(S.vertices, vandermonde_simplex(r, xi).vertices, rtol=1e-14, atol=1e-15)
    np.testing.assert_allclose(vandermonde_weights(r), coef / coef[0])


@given(roots_and_state(max_n=5))
def test_generic_constructor_reproduces_exponential(case):
    r, xi = case
    order = np.argsort(r)[::-1]
    w = exponential_coefficients(r, xi)[order]
    S = simplicial_bound(w, kind="exponential")
    np.testing.assert_allclose(S.vertices, exponential_simplex(r, xi).vertices, rtol=1e-14, atol=1e-14)


@given(roots_and_state(max_n=5))
def test_exponential_last_vertex_is_initial_position(case):
    r, xi = case
    S = exponential_simplex(r, xi)
    np.testing.assert_allclose(S.vertices[-1], xi[0], atol=1e-9 * max(1, np.abs(S.vertices).max()))
    np.testing.assert_array_equal(S.vertices[0], 0.0)


def test_plain_partial_sums():
    y = np.array([[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]])
    S = simplicial_bound(y)
    np.testing.assert_allclose(S.vertices, [[0, 0], [1, 2], [4, 6], [9, 12]])


@pytest.mark.parametrize("eps", [1e-2, 1e-4, 1e-6])
def test_repeated_root_continuity(eps, rng):
    xi = rng.uniform(-1, 1, (2, 2))
    near = vandermonde_simplex([-2.0, -2.0 + eps], xi).vertices
    exact = vandermonde_simplex([-2.0, -2.0], xi).vertices
    assert np.max(np.abs(near - exact)) <= 2 * eps


def test_repeated_roots_contain_trajectory(rng):
    for n in (2, 3, 4):
        r = np.full(n, -1.5)
        xi = rng.uniform(-1, 1, (n, 2))
        assert max_violation(vandermonde_simplex(r, xi), rk4_positions(r, xi)) <= 1e-9


@given(roots_and_state(min_n=2, max_n=4, max_d=3))
def test_simplexes_contain_rk4_trajectory(case):
    r, xi = case
    pts = rk4_positions(r, xi)
    assert max_violation(vandermonde_simplex(r, xi), pts) <= 1e-6
    assert max_violation(exponential_simplex(r, xi), pts) <= 1e-6


def test_shrunk_simplex_is_violated(rng):
    r = np.array([-1.0, -2.0, -3.0])
    xi = rng.uniform(-1, 1, (3, 2))
    S = vandermonde_simplex(r, xi)
    assert max_violation(S.scaled(0.5), rk4_positions(r, xi)) > 1e-3
    assert S.scaled(0.5).meta["scaled"] == 0.5
