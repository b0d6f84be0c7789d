"""Independent reference computations shared by the unit and acceptance tests."""

import numpy as np
from scipy.linalg import solve_continuous_lyapunov

from companion_bounds.basis import (
    basis_ratio, default_time_grid, vandermonde_basis, vandermonde_matrix,
)
from companion_bounds.companion import (
    coefficients_excluding, companion_matrix, exclude_max, gains_from_roots,
)


def generic_inverse_basis(roots, t):
    """``e^{lambda t} V^-1`` with a generic LU inverse."""
    r = np.asarray(roots, dtype=float)
    return np.exp(np.multiply.outer(np.asarray(t, float), r)) @ np.linalg.inv(vandermonde_matrix(r))


def lyapunov_oracle(A, C):
    """P with ``A^T P + P A + C^T C = 0`` from scipy's Bartels-Stewart solver."""
    return solve_continuous_lyapunov(np.asarray(A).T, -np.asarray(C).T @ np.asarray(C))


def expm_trajectory(roots, state, t):
    """Positions from the matrix exponential of the companion matrix (scipy)."""
    from scipy.linalg import expm

    A = companion_matrix(roots)
    xi = np.asarray(state, float)
    return np.array([(expm(A * s) @ xi)[0] for s in np.atleast_1d(t)])


def basis_property_margins(roots, num=200, h=1e-5, t_fd=10.0):
    """Worst-case margins of every basis invariant for one real, distinct spectrum.

    Each entry is a normalized error that must be at most the listed bound:
    ``nonneg``, ``ordering_tight`` and ``ordering_loose`` are amounts by which
    inequalities fail, ``v0_upper`` and ``v0_monotone`` likewise, and
    ``ratio_limit``, ``permutation``, ``dynamics``, ``recursive_dynamics``
    are relative deviations.
    """
    r = np.asarray(roots, dtype=float)
    n = r.size
    grid = default_time_grid(r, num)
    v = vandermonde_basis(r, grid)
    out = {"nonneg": float(max(0.0, -v.min()))}

    a = gains_from_roots(r)
    a_ext = np.r_[a, 1.0]
    tight = loose = 0.0
    for k in range(1, n):
        loose = max(loose, float(np.max(a_ext[k - 1] * v[:, k] - a_ext[k] * v[:, k - 1])))
        for i in range(n):
            b = coefficients_excluding(r, i)
            tight = max(tight, float(np.max(b[k - 1] * v[:, k] - b[k] * v[:, k - 1])))
    out["ordering_tight"] = max(tight, 0.0)
    out["ordering_loose"] = max(loose, 0.0)

    v0 = v[:, 0]
    out["v0_upper"] = float(max(0.0, v0.max() - 1.0))
    out["v0_start"] = float(abs(v0[0] - 1.0))
    out["v0_monotone"] = float(max(0.0, np.max(np.diff(v0))))

    ratio = 0.0
    if n >= 2:
        rest, coef = exclude_max(r)
        gap = abs(rest.max() - r.max())
        T = 80.0 / gap
        for k in range(1, n):
            limit = coef[k - 1] / coef[k]
            ratio = max(ratio, abs(float(basis_ratio(r, k, T)) / limit - 1.0))
    out["ratio_limit"] = ratio

    rng = np.random.default_rng(n)
    perm = rng.permutation(n)
    vp = vandermonde_basis(r[perm], grid)
    out["permutation"] = float(np.max(np.abs(vp - v)))

    # central differences strictly inside t > 0
    ts = np.linspace(h, t_fd, 101)
    vt = vandermonde_basis(r, ts)
    fd = (vandermonde_basis(r, ts + h) - vandermonde_basis(r, ts - h)) / (2 * h)
    A = companion_matrix(r)
    scale = max(1.0, float(np.abs(r).max())) ** 2
    out["dynamics"] = float(np.max(np.abs(fd - vt @ A)) / scale)

    rec = 0.0
    for l in range(n):
        sub = np.delete(r, l)
        vs = vandermonde_basis(sub, ts) if n > 1 else np.zeros((ts.size, 0))
        vs = np.concatenate([vs, np.zeros((ts.size, 1))], axis=1)     # v_{n-1, not l} = 0
        shifted = np.concatenate([np.zeros((ts.size, 1)), vs[:, :-1]], axis=1)
        rhs = r[l] * vt - r[l] * vs + shifted
        rec = max(rec, float(np.max(np.abs(fd - rhs)) / scale))
    out["recursive_dynamics"] = rec
    return out


BASIS_TOLERANCES = {
    "nonneg": 1e-9,
    "ordering_tight": 1e-9,
    "ordering_loose": 1e-9,
    "v0_upper": 1e-12,
    "v0_start": 1e-10,
    "v0_monotone": 1e-12,
    "ratio_limit": 1e-2,
    "permutation": 1e-10,
    "dynamics": 1e-6,
    "recursive_dynamics": 1e-6,
}
