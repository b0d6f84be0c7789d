"""Simplicial trajectory bounds for companion systems.

Every bound here is the convex hull of the origin and n partial sums of
weighted trajectory coefficients. Vertex 0 is always the origin.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .companion import DEFAULT_DISTINCT_TOL, exclude_max, require_stable_real
from .errors import DomainError, InvalidInputError
from .trajectory import as_state, exponential_coefficients

KINDS = ("vandermonde", "exponential", "generic")


@dataclass(frozen=True)
class SimplexBound:
    """Origin plus n partial-sum vertices, shape ``(n + 1, d)``."""

    vertices: np.ndarray
    kind: str = "generic"
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidInputError(f"unknown simplex kind {self.kind!r}")

    @property
    def dim(self) -> int:
        return self.vertices.shape[1]

    @property
    def order(self) -> int:
        return self.vertices.shape[0] - 1

    def scaled(self, factor: float) -> "SimplexBound":
        return SimplexBound(self.vertices * factor, self.kind, dict(self.meta, scaled=factor))


def simplicial_bound(coefficients, weights=None, kind: str = "generic") -> SimplexBound:
    """Convex bound for ``x(t) = sum_i y_i theta_i(t)`` with ordered basis functions.

    Given nonnegative basis functions with ``beta_i theta_i >= beta_j theta_j``
    for ``i <= j`` and ``theta_0 <= 1``, the trajectory stays in
    ``conv{ sum_{j<i} (beta_0 / beta_j) y_j : i = 0..n }``.

    Parameters
    ----------
    coefficients : (n, d) array
        Trajectory coefficients ``y_0 .. y_{n-1}``.
    weights : (n,) array, optional
        Ordering weights ``beta_j > 0``; all ones when omitted.
    """
    y = as_state(coefficients)
    beta = np.ones(y.shape[0]) if weights is None else np.asarray(weights, dtype=float)
    if beta.shape != (y.shape[0],):
        raise InvalidInputError(f"need {y.shape[0]} weights, got shape {beta.shape}")
    if not np.all(np.isfinite(beta)) or np.any(beta <= 0):
        raise DomainError("ordering weights must be finite and strictly positive")
    steps = (beta[0] / beta)[:, None] * y
    vertices = np.vstack([np.zeros((1, y.shape[1])), np.cumsum(steps, axis=0)])
    return SimplexBound(vertices, kind)


def vandermonde_weights(roots) -> np.ndarray:
    """Vertex weights ``a_{j, not max} / a_{0, not max}`` for j = 0..n-1."""
    r = require_stable_real(roots)
    _, coef = exclude_max(r)
    return coef / coef[0]


def vandermonde_simplex(roots, state) -> SimplexBound:
    """Vandermonde simplex containing the whole trajectory from ``state``.

    Vertices are 0 and ``sum_{j<i} (a_{j, not max} / a_{0, not max}) x0^(j)``
    for i = 1..n, where the gains belong to the roots with one maximal root
    removed. Roots must be real and strictly negative; repeats are allowed.

    >>> vandermonde_simplex([-1.0, -2.0], [[1.0, 0.0], [0.0, 1.0]]).vertices
    array([[0. , 0. ],
           [1. , 0. ],
           [1. , 0.5]])
    """
    r = require_stable_real(roots)
    xi = as_state(state, r.size)
    w = vandermonde_weights(r)
    vertices = np.vstack([np.zeros((1, xi.shape[1])), np.cumsum(w[:, None] * xi, axis=0)])
    return SimplexBound(vertices, "vandermonde", {"roots": r.tolist()})


def exponential_simplex(roots, state, tol: float = DEFAULT_DISTINCT_TOL) -> SimplexBound:
    """Exponential simplex from partial sums of exponential coefficients.

    Coefficients are summed starting from the slowest mode (the root closest
    to zero), whose exponential dominates all others for t >= 0; the last
    vertex is the full sum ``x0^(0)``. Roots must be real, strictly negative
    and distinct.
    """
    r = require_stable_real(roots)
    xi = as_state(state, r.size)
    order = np.argsort(r, kind="stable")[::-1]
    w = exponential_coefficients(r, xi, tol)[order]
    vertices = np.vstack([np.zeros((1, xi.shape[1])), np.cumsum(w, axis=0)])
    return SimplexBound(vertices, "exponential", {"roots": r[order].tolist()})
