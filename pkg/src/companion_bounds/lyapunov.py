"""Lyapunov equations and projected Lyapunov ellipsoids.

The companion state ``xi`` (n x d) is flattened derivative-order first,
``[x^(0), x^(1), ..., x^(n-1)]``, which is exactly the ordering on which
``kron(A, I_d)`` acts. ``xi.reshape(-1)`` on a C-ordered array produces it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .companion import as_roots, companion_matrix
from .ellipsoid import Ellipsoid, check_orthonormal_columns, ellipsoid_project
from .errors import DomainError, InvalidInputError, NumericalError
from .trajectory import as_state

OBSERVABILITY_RTOL = 1e-10


@dataclass(frozen=True)
class LyapunovCertificate:
    """Solution ``P`` of ``A^T P + P A + D^T D = 0`` with its relative residual."""

    P: np.ndarray
    decay: np.ndarray
    residual: float

    @property
    def min_eigenvalue(self) -> float:
        return float(np.linalg.eigvalsh(self.P).min())


def flatten_state(state) -> np.ndarray:
    return np.ascontiguousarray(as_state(state)).reshape(-1)


def is_observable(A, C, rtol: float = OBSERVABILITY_RTOL) -> bool:
    """Rank test on the stacked observability matrix ``[C; CA; ...; CA^(N-1)]``."""
    A = np.asarray(A, dtype=float)
    C = np.atleast_2d(np.asarray(C, dtype=float))
    blocks, block = [], C
    for _ in range(A.shape[0]):
        blocks.append(block)
        block = block @ A
    s = np.linalg.svd(np.vstack(blocks), compute_uv=False)
    return bool(s.size and np.sum(s > rtol * s[0]) >= A.shape[0])


def solve_lyapunov_matrix(A, C) -> LyapunovCertificate:
    """Solve ``A^T P + P A + C^T C = 0`` by vectorization.

    ``(I kron A^T + A^T kron I) vec(P) = -vec(C^T C)``, then symmetrized.
    Requires A Hurwitz and (A, C) observable so that P is positive definite.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    C = np.atleast_2d(np.asarray(C, dtype=float))
    N = A.shape[0]
    if A.shape != (N, N):
        raise InvalidInputError(f"A must be square, got {A.shape}")
    if C.shape[1] != N:
        raise InvalidInputError(f"decay matrix has {C.shape[1]} columns, expected {N}")
    if not (np.all(np.isfinite(A)) and np.all(np.isfinite(C))):
        raise InvalidInputError("matrices must be finite")
    if np.max(np.linalg.eigvals(A).real) >= 0:
        raise DomainError("A is not Hurwitz: every eigenvalue needs a negative real part")
    if not is_observable(A, C):
        raise DomainError("(A, D) is not observable; the Lyapunov matrix would be singular")
    Q = C.T @ C
    I = np.eye(N)
    # row-major vec: vec(A^T P) = (A^T kron I) vec(P), vec(P A) = (I kron A^T) vec(P)
    L = np.kron(A.T, I) + np.kron(I, A.T)
    try:
        P = np.linalg.solve(L, -Q.reshape(-1)).reshape(N, N)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"Lyapunov solve failed: {exc}") from exc
    P = 0.5 * (P + P.T)
    res = np.linalg.norm(A.T @ P + P @ A + Q) / max(np.linalg.norm(Q), np.finfo(float).tiny)
    if not np.all(np.isfinite(P)) or np.linalg.eigvalsh(P).min() <= 0:
        raise NumericalError("Lyapunov solution is not positive definite")
    return LyapunovCertificate(P, C, float(res))


def companion_system_matrix(roots, dim: int) -> np.ndarray:
    """``kron(A_lambda, I_d)`` acting on the flattened companion state."""
    if dim < 1:
        raise InvalidInputError("dimension must be at least 1")
    return np.kron(companion_matrix(as_roots(roots)), np.eye(dim))


def solve_lyapunov(roots, dim: int, decay=None) -> LyapunovCertificate:
    """Lyapunov certificate for the d-dimensional companion system.

    ``decay`` defaults to the ``nd x nd`` identity.
    """
    r = as_roots(roots)
    if np.any(r.real >= 0):
        raise DomainError("roots must have strictly negative real parts")
    A = companion_system_matrix(r, dim)
    D = np.eye(A.shape[0]) if decay is None else np.atleast_2d(np.asarray(decay, dtype=float))
    return solve_lyapunov_matrix(A, D)


def position_selector(order: int, dim: int) -> np.ndarray:
    """``I_{nd x d}``: the first d coordinates of the flattened state."""
    return np.eye(order * dim, dim)


def projected_lyapunov_ellipsoid(roots, state, decay=None, certificate=None) -> Ellipsoid:
    """Position bound ``E(0, [P^-1]_{dd}, ||xi0||_P)`` valid for all t >= 0.

    ``certificate`` may be passed to reuse a solved Lyapunov matrix.
    """
    r = as_roots(roots)
    xi = as_state(state, r.size)
    d = xi.shape[1]
    cert = certificate if certificate is not None else solve_lyapunov(r, d, decay)
    P = cert.P
    if P.shape != (r.size * d,) * 2:
        raise InvalidInputError("certificate does not match the state dimensions")
    y0 = xi.reshape(-1)
    radius = float(np.sqrt(max(y0 @ P @ y0, 0.0)))
    shape = np.linalg.inv(P)[:d, :d]
    return Ellipsoid(np.zeros(d), 0.5 * (shape + shape.T), radius)


def lyapunov_ellipsoid_general(A, C, y0, Q=None, p=None) -> Ellipsoid:
    """Projected Lyapunov ellipsoid for ``y' = A y`` in the coordinates of ``Q``.

    The full-state bound ``E(0, P^-1, ||y0||_P)`` is projected onto the
    affine subspace ``{Q z + p}`` and returned in subspace coordinates
    ``E(-Q^T p, Q^T P^-1 Q, ||y0||_P)``. With ``Q`` omitted the full-state
    ellipsoid is returned.
    """
    A = np.atleast_2d(np.asarray(A, dtype=float))
    y0 = np.atleast_1d(np.asarray(y0, dtype=float))
    if y0.shape != (A.shape[0],):
        raise InvalidInputError(f"initial state has shape {y0.shape}, expected ({A.shape[0]},)")
    cert = solve_lyapunov_matrix(A, C)
    Pinv = np.linalg.inv(cert.P)
    full = Ellipsoid(np.zeros(A.shape[0]), 0.5 * (Pinv + Pinv.T),
                     float(np.sqrt(max(y0 @ cert.P @ y0, 0.0))))
    if Q is None:
        return full
    Q = check_orthonormal_columns(Q)
    return ellipsoid_project(full, Q, p).coords


def lyapunov_values(P, states) -> np.ndarray:
    """``xi^T P xi`` for a stack of (n, d) states."""
    flat = np.asarray(states, dtype=float).reshape(len(states), -1)
    return np.einsum("ij,jk,ik->i", flat, P, flat)
