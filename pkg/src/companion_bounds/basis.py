"""Exponential and Vandermonde basis functions.

The Vandermonde basis is ``v(t) = e^{lambda t} V^{-1}``, a row vector whose
k-th entry multiplies the k-th initial derivative in the companion trajectory
``x(t) = sum_k v_k(t) x0^(k)``. Two independent evaluations are provided: the
explicit expansion over exponentials (default) and Cramer's rule with
row-replaced Vandermonde determinants.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .companion import (
    DEFAULT_DISTINCT_TOL,
    as_roots,
    closest_pair,
    coefficients_excluding,
    exclude_max,
    require_stable_real,
    root_scale,
)
from .errors import InvalidInputError, SingularityError


def check_distinct(roots, tol: float = DEFAULT_DISTINCT_TOL) -> None:
    """Raise :class:`SingularityError` naming the closest pair if roots collide."""
    r = np.asarray(roots)
    pair, gap = closest_pair(r)
    if gap <= tol * root_scale(r):
        i, j = pair
        raise SingularityError(
            f"roots {i} and {j} ({r[i].item()}, {r[j].item()}) are closer than the "
            f"distinctness tolerance; the Vandermonde matrix is singular",
            pair=pair,
        )


def separate_roots(roots, eps: float | None = None) -> np.ndarray:
    """Nudge colliding real roots apart by ``eps`` (default ``1e-6 * scale``).

    Opt-in helper for callers that accept a perturbed spectrum. Roots are
    spread in sorted order so each consecutive gap is at least ``eps``; the
    original ordering of the input is preserved.
    """
    r = as_roots(roots, allow_complex=False)
    if eps is None:
        eps = 1e-6 * root_scale(r)
    order = np.argsort(r, kind="stable")
    s = r[order].copy()
    for i in range(1, s.size):
        if s[i] - s[i - 1] < eps:
            s[i] = s[i - 1] + eps
    out = np.empty_like(s)
    out[order] = s
    return out


def vandermonde_matrix(roots) -> np.ndarray:
    """``[V]_{ij} = lambda_j^(i-1)``: column j holds the powers of root j."""
    r = as_roots(roots)
    return np.vander(r, increasing=True).T


def vandermonde_inverse(roots, tol: float = DEFAULT_DISTINCT_TOL) -> np.ndarray:
    """Closed-form inverse of the Vandermonde matrix.

    Row i holds the coefficients of the i-th Lagrange polynomial:
    ``[V^-1]_{ij} = (-1)^(n-1) a_{j-1, lambda_not_i} / prod_{k != i} (lambda_k - lambda_i)``.
    """
    r = as_roots(roots)
    check_distinct(r, tol)
    n = r.size
    inv = np.empty((n, n), dtype=r.dtype)
    sign = (-1.0) ** (n - 1)
    for i in range(n):
        denom = np.prod(np.delete(r, i) - r[i])
        inv[i] = sign * coefficients_excluding(r, i) / denom
    return inv


def vandermonde_det(roots, pivot: int | None = None) -> float:
    """Vandermonde determinant by the row-reduction recursion.

    ``det V = (-1)^(l-1) prod_{k != l} (lambda_k - lambda_l) det V_{not l}``
    applied top-down, removing the root at position ``pivot`` (default: last)
    of the current sub-spectrum. Intermediate determinants are memoized by the
    set of remaining indices for the duration of the call.
    """
    r = as_roots(roots)

    @lru_cache(maxsize=None)
    def det(remaining: tuple[int, ...]):
        m = len(remaining)
        if m == 1:
            return 1.0
        l = m - 1 if pivot is None else min(pivot, m - 1)
        lam_l = r[remaining[l]]
        others = remaining[:l] + remaining[l + 1:]
        factor = np.prod([r[k] - lam_l for k in others])
        return (-1.0) ** l * factor * det(others)

    return det(tuple(range(r.size)))


def vandermonde_det_product(roots) -> float:
    """Closed product ``prod_{k < l} (lambda_l - lambda_k)``."""
    r = as_roots(roots)
    out = 1.0
    for k in range(r.size):
        for l in range(k + 1, r.size):
            out = out * (r[l] - r[k])
    return out


def _check_times(t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    if not np.all(np.isfinite(t)) or np.any(t < 0):
        raise InvalidInputError("times must be finite and nonnegative")
    return t


def exponential_basis(roots, t) -> np.ndarray:
    """``[e^{lambda_1 t}, ..., e^{lambda_n t}]``; shape ``t.shape + (n,)``."""
    r = as_roots(roots)
    t = _check_times(t)
    return np.exp(np.multiply.outer(t, r))


def vandermonde_basis(roots, t, tol: float = DEFAULT_DISTINCT_TOL) -> np.ndarray:
    """Vandermonde basis ``v(t)`` via its expansion over exponentials.

    Returns shape ``t.shape + (n,)``; ``v(0) = [1, 0, ..., 0]``.

    Since ``[1, ..., 1] V^-1 = e_1``, also ``v(t) = e_1 + (e^{lambda t} - 1) V^-1``;
    each entry takes whichever form has the smaller rounding bound, which
    removes the cancellation near t = 0.
    """
    r = as_roots(roots)
    inv = vandermonde_inverse(r, tol)
    z = np.multiply.outer(_check_times(t), r)
    E, M = np.exp(z), np.expm1(z)
    direct = E @ inv
    shifted = M @ inv
    shifted[..., 0] += 1.0
    absinv = np.abs(inv)
    return np.where(np.abs(M) @ absinv < np.abs(E) @ absinv, shifted, direct)


def scaled_vandermonde_basis(roots, t, tol: float = DEFAULT_DISTINCT_TOL) -> np.ndarray:
    """``e^{-lambda_max t} v(t)`` for real roots, free of underflow at large t.

    Only the relative size of the basis functions survives the scaling, which
    is what ratio limits need.
    """
    r = as_roots(roots, allow_complex=False)
    inv = vandermonde_inverse(r, tol)
    t = _check_times(t)
    return np.exp(np.multiply.outer(t, r - r.max())) @ inv


def vandermonde_basis_cramer(roots, t, tol: float = DEFAULT_DISTINCT_TOL) -> np.ndarray:
    """Vandermonde basis by Cramer's rule.

    ``v_k(t) = det V_k(t) / det V`` where ``V_k(t)`` is V with row k replaced
    by ``e^{lambda t}``. Independent of :func:`vandermonde_basis`; used as its
    oracle.
    """
    r = as_roots(roots)
    check_distinct(r, tol)
    V = vandermonde_matrix(r)
    denom = np.linalg.det(V)
    E = exponential_basis(r, t)
    flat = E.reshape(-1, r.size)
    out = np.empty_like(flat)
    for row, e in enumerate(flat):
        for k in range(r.size):
            Vk = V.copy()
            Vk[k] = e
            out[row, k] = np.linalg.det(Vk) / denom
    return out.reshape(E.shape)


def basis_ratio_limit(roots, k: int) -> float:
    """Limit of ``v_{k-1}(t) / v_k(t)`` as t grows: ``a_{k-1} / a_k`` of lambda_not_max."""
    r = require_stable_real(roots)
    if not 1 <= k <= r.size - 1:
        raise InvalidInputError(f"k must lie in 1..{r.size - 1}")
    _, coef = exclude_max(r)
    return float(coef[k - 1] / coef[k])


def basis_ratio(roots, k: int, t) -> np.ndarray:
    """``v_{k-1}(t) / v_k(t)``, evaluated on the underflow-free scaled basis."""
    r = require_stable_real(roots)
    if not 1 <= k <= r.size - 1:
        raise InvalidInputError(f"k must lie in 1..{r.size - 1}")
    v = scaled_vandermonde_basis(r, t)
    return v[..., k - 1] / v[..., k]


def default_time_grid(roots, num: int = 200, span: float = 50.0) -> np.ndarray:
    """``t = 0`` followed by ``num - 1`` log-spaced times up to ``span / |lambda_max|``.

    The first positive time resolves the fastest mode, ``1e-3 / |lambda_min|``.
    """
    r = require_stable_real(roots)
    t_end = span / abs(r.max())
    t_start = min(1e-3 / abs(r.min()), t_end / 10)
    return np.concatenate([[0.0], np.geomspace(t_start, t_end, num - 1)])


def is_nonovershooting(roots, t_grid=None, tol: float = 1e-9) -> bool:
    """True iff every Vandermonde basis function is ``>= -tol`` on the grid.

    Roots must be real and distinct; complex spectra are rejected.
    """
    r = as_roots(roots, allow_complex=False)
    if t_grid is None:
        t_grid = default_time_grid(r) if np.all(r < 0) else np.linspace(0.0, 10.0, 200)
    v = vandermonde_basis(r, t_grid)
    return bool(np.all(v >= -tol))
