"""Ellipsoids ``E(c, Q, r) = {c + Q^{1/2} u : ||u|| <= r}`` and their calculus."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError, InvalidInputError

SYMMETRY_TOL = 1e-9
PSD_TOL = 1e-10
ORTHO_TOL = 1e-10
EIG_ROUNDOFF = 1e-13


def matrix_sqrt_psd(Q) -> np.ndarray:
    """Symmetric PSD square root ``S`` with ``S S^T = Q``.

    Small negative eigenvalues (down to ``-1e-10`` relative) are clamped to 0,
    as are positive ones at round-off level relative to the largest, so that
    rank-deficient shapes keep an exactly rank-deficient root.
    """
    Q = np.atleast_2d(np.asarray(Q, dtype=float))
    if Q.ndim != 2 or Q.shape[0] != Q.shape[1]:
        raise InvalidInputError(f"expected a square matrix, got shape {Q.shape}")
    scale = max(1.0, float(np.max(np.abs(Q)))) if Q.size else 1.0
    if np.max(np.abs(Q - Q.T), initial=0.0) > SYMMETRY_TOL * scale:
        raise InvalidInputError("matrix is not symmetric")
    w, U = np.linalg.eigh(0.5 * (Q + Q.T))
    if w.size and w.min() < -PSD_TOL * scale:
        raise DomainError(f"matrix is not positive semidefinite (min eigenvalue {w.min():.3g})")
    w = np.where(w > EIG_ROUNDOFF * max(w.max(initial=0.0), 0.0), w, 0.0)
    S = (U * np.sqrt(w)) @ U.T
    return 0.5 * (S + S.T)


@dataclass(frozen=True)
class Ellipsoid:
    """Ellipsoid with center ``c``, PSD shape ``Q`` and radius ``r``.

    For invertible Q membership reads ``(x - c)^T Q^{-1} (x - c) <= r^2``;
    rank-deficient shapes are handled through the minimum-norm preimage.
    """

    center: np.ndarray
    shape: np.ndarray
    radius: float

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.center, dtype=float))
        Q = np.atleast_2d(np.asarray(self.shape, dtype=float))
        r = float(self.radius)
        if c.ndim != 1 or Q.shape != (c.size, c.size):
            raise InvalidInputError(f"center {c.shape} and shape {Q.shape} disagree")
        if not (np.all(np.isfinite(c)) and np.all(np.isfinite(Q)) and np.isfinite(r)):
            raise InvalidInputError("ellipsoid data must be finite")
        if r < 0:
            raise InvalidInputError("radius must be nonnegative")
        scale = max(1.0, float(np.max(np.abs(Q))))
        if np.max(np.abs(Q - Q.T)) > SYMMETRY_TOL * scale:
            raise InvalidInputError("shape matrix must be symmetric")
        Q = 0.5 * (Q + Q.T)
        if np.linalg.eigvalsh(Q).min() < -PSD_TOL * scale:
            raise DomainError("shape matrix must be positive semidefinite")
        object.__setattr__(self, "center", c)
        object.__setattr__(self, "shape", Q)
        object.__setattr__(self, "radius", r)

    @property
    def dim(self) -> int:
        return self.center.size

    @property
    def sqrt_shape(self) -> np.ndarray:
        return matrix_sqrt_psd(self.shape)

    @property
    def semi_axes(self) -> np.ndarray:
        """Semi-axis lengths ``r sqrt(eig(Q))``, ascending."""
        return self.radius * np.sqrt(np.clip(np.linalg.eigvalsh(self.shape), 0.0, None))

    @property
    def scale(self) -> float:
        return float(self.semi_axes.max()) if self.dim else 0.0

    def preimage(self, x) -> tuple[np.ndarray, np.ndarray]:
        """Minimum-norm ``u`` with ``Q^{1/2} u ~ x - c`` and the fit residual norm.

        Accepts a single point ``(m,)`` or a batch ``(k, m)``.
        """
        x = np.asarray(x, dtype=float)
        S = self.sqrt_shape
        rel = np.atleast_2d(x) - self.center
        u = rel @ np.linalg.pinv(S, rcond=1e-12).T
        residual = np.linalg.norm(u @ S.T - rel, axis=-1)
        norms = np.linalg.norm(u, axis=-1)
        if x.ndim == 1:
            return norms[0], residual[0]
        return norms, residual

    def violation(self, x) -> np.ndarray:
        """Signed, scale-relative excess of ``x`` outside the ellipsoid.

        ``max((||u|| - r) s_max, residual) / (1 + ||x|| + s_max)`` where
        ``s_max`` is the largest semi-axis. Nonpositive inside.
        """
        x = np.asarray(x, dtype=float)
        norms, residual = self.preimage(x)
        sigma = float(np.sqrt(max(np.linalg.eigvalsh(self.shape).max(), 0.0))) if self.dim else 0.0
        excess = (norms - self.radius) * sigma
        denom = 1.0 + np.linalg.norm(np.atleast_2d(x), axis=-1) + self.radius * sigma
        if x.ndim == 1:
            denom = denom[0]
        return np.maximum(excess, residual) / denom

    def contains(self, x, tol: float = 1e-9):
        """Membership: residual within ``tol`` (relative) and ``||u|| <= r (1 + tol)``."""
        x = np.asarray(x, dtype=float)
        norms, residual = self.preimage(x)
        scale = 1.0 + np.linalg.norm(np.atleast_2d(x), axis=-1) + self.scale
        if x.ndim == 1:
            scale = scale[0]
        return (residual <= tol * scale) & (norms <= self.radius * (1 + tol) + tol)

    def boundary_points(self, count: int = 64) -> np.ndarray:
        """Points ``c + r Q^{1/2} u`` for unit ``u``; 2-D uses an even angle sweep."""
        S = self.sqrt_shape
        if self.dim == 1:
            u = np.array([[-1.0], [1.0]])
        elif self.dim == 2:
            a = np.linspace(0.0, 2 * np.pi, count, endpoint=False)
            u = np.column_stack([np.cos(a), np.sin(a)])
        else:
            g = np.random.default_rng(0).normal(size=(count, self.dim))
            u = g / np.linalg.norm(g, axis=1, keepdims=True)
        return self.center + self.radius * u @ S.T


def ellipsoid_affine_transform(E: Ellipsoid, A, b=None) -> Ellipsoid:
    """Image of ``E`` under ``x -> A x + b``: ``E(A c + b, A Q A^T, r)``."""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    if A.shape[1] != E.dim:
        raise InvalidInputError(f"map of shape {A.shape} cannot act on a {E.dim}-D ellipsoid")
    b = np.zeros(A.shape[0]) if b is None else np.atleast_1d(np.asarray(b, dtype=float))
    if b.shape != (A.shape[0],):
        raise InvalidInputError(f"offset has shape {b.shape}, expected ({A.shape[0]},)")
    Q = A @ E.shape @ A.T
    return Ellipsoid(A @ E.center + b, 0.5 * (Q + Q.T), E.radius)


def check_orthonormal_columns(Q, tol: float = ORTHO_TOL) -> np.ndarray:
    Q = np.asarray(Q, dtype=float)
    if Q.ndim == 1:
        Q = Q[:, None]
    if Q.ndim != 2:
        raise InvalidInputError("Q must be a 2-D matrix")
    if np.max(np.abs(Q.T @ Q - np.eye(Q.shape[1]))) > tol:
        raise DomainError("Q must have orthonormal columns (Q^T Q = I)")
    return Q


def point_project(x, Q, p=None) -> np.ndarray:
    """Closest point to ``x`` on the affine subspace ``{Q y + p}``: ``Q Q^T (x - p) + p``."""
    Q = check_orthonormal_columns(Q)
    x = np.asarray(x, dtype=float)
    p = np.zeros(Q.shape[0]) if p is None else np.asarray(p, dtype=float)
    return (x - p) @ Q @ Q.T + p


class ProjectedEllipsoid(NamedTuple):
    ambient: Ellipsoid
    coords: Ellipsoid


def ellipsoid_project(E: Ellipsoid, Q, p=None) -> ProjectedEllipsoid:
    """Orthogonal projection of ``E`` onto the affine subspace ``{Q y + p}``.

    ``ambient`` is ``E(QQ^T (c - p) + p, QQ^T Q_E QQ^T, r)`` in the original
    space; ``coords`` is ``E(Q^T (c - p), Q^T Q_E Q, r)`` in subspace
    coordinates, which maps onto ``ambient`` through ``y -> Q y + p``.
    """
    Q = check_orthonormal_columns(Q)
    if Q.shape[0] != E.dim:
        raise InvalidInputError(f"Q has {Q.shape[0]} rows, ellipsoid lives in {E.dim}-D")
    p = np.zeros(E.dim) if p is None else np.asarray(p, dtype=float)
    coords = ellipsoid_affine_transform(E, Q.T, -Q.T @ p)
    P = Q @ Q.T
    ambient = ellipsoid_affine_transform(E, P, p - P @ p)
    return ProjectedEllipsoid(ambient, coords)
