"""Characteristic roots, companion coefficients and companion matrices.

An n-th order companion system ``x^(n) = -sum_k a_k x^(k)`` has characteristic
polynomial ``s^n + a_{n-1} s^{n-1} + ... + a_0 = prod_i (s - lambda_i)``.
Coefficient vectors in this module are stored in ascending order,
``[a_0, ..., a_{n-1}]``; the leading ``a_n = 1`` is implicit unless stated.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InvalidInputError, NumericalError

DEFAULT_DISTINCT_TOL = 1e-9

# Imaginary parts below this (relative to root scale) are treated as round-off.
_REAL_TOL = 1e-10


@dataclass(frozen=True)
class RootSpectrum:
    """Ordered characteristic roots.

    ``roots`` is a real array when every root is real, otherwise complex with
    conjugate pairs kept together.
    """

    roots: np.ndarray

    def __post_init__(self):
        r = np.atleast_1d(np.asarray(self.roots))
        if r.ndim != 1 or r.size == 0:
            raise InvalidInputError("a root spectrum needs at least one root")
        if not np.all(np.isfinite(r)):
            raise InvalidInputError("roots must be finite")
        r = r.copy()
        r.setflags(write=False)
        object.__setattr__(self, "roots", r)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.roots, dtype=dtype)

    def __len__(self):
        return self.roots.size

    @property
    def order(self) -> int:
        return self.roots.size

    @property
    def is_real(self) -> bool:
        return not np.iscomplexobj(self.roots)

    @property
    def conjugate_pairs(self) -> list[tuple[complex, complex]]:
        """Complex conjugate pairs ``(a + bi, a - bi)`` with ``b > 0``."""
        if self.is_real:
            return []
        upper = [z for z in self.roots if z.imag > 0]
        return [(complex(z), complex(np.conj(z))) for z in upper]

    def is_distinct(self, tol: float = DEFAULT_DISTINCT_TOL) -> bool:
        return is_distinct(self.roots, tol)

    def is_stable_real(self) -> bool:
        return self.is_real and bool(np.all(self.roots < 0))


def as_roots(roots, *, allow_complex: bool = True) -> np.ndarray:
    """Validate ``roots`` and return a 1-D float (or complex) array."""
    if isinstance(roots, RootSpectrum):
        r = np.asarray(roots.roots)
    else:
        r = np.atleast_1d(np.asarray(roots))
    if r.ndim != 1 or r.size == 0:
        raise InvalidInputError("expected a nonempty 1-D sequence of roots")
    if r.dtype.kind not in "biufc":
        raise InvalidInputError("roots must be numeric")
    if not np.all(np.isfinite(r)):
        raise InvalidInputError("roots must be finite")
    if np.iscomplexobj(r):
        scale = max(1.0, float(np.max(np.abs(r))))
        if np.all(np.abs(r.imag) <= _REAL_TOL * scale):
            r = r.real
        elif not allow_complex:
            raise DomainError("complex roots are not supported here")
    return r.astype(complex if np.iscomplexobj(r) else float)


def require_stable_real(roots) -> np.ndarray:
    """Roots accepted by the simplex bounds: real and strictly negative."""
    r = as_roots(roots, allow_complex=False)
    if np.any(r >= 0):
        raise DomainError(f"roots must be strictly negative, got {r.tolist()}")
    return r


def root_scale(roots) -> float:
    r = np.asarray(roots)
    return max(1.0, float(np.max(np.abs(r)))) if r.size else 1.0


def closest_pair(roots) -> tuple[tuple[int, int], float]:
    """Indices and gap of the two closest roots (``((-1, -1), inf)`` if n < 2)."""
    r = np.asarray(roots)
    n = r.size
    best, pair = np.inf, (-1, -1)
    for i in range(n):
        for j in range(i + 1, n):
            gap = abs(r[i] - r[j])
            if gap < best:
                best, pair = gap, (i, j)
    return pair, float(best)


def is_distinct(roots, tol: float = DEFAULT_DISTINCT_TOL) -> bool:
    """True iff the minimum pairwise gap exceeds ``tol * max(1, max|lambda|)``."""
    r = as_roots(roots)
    _, gap = closest_pair(r)
    return gap > tol * root_scale(r)


def monic_coefficients(roots) -> np.ndarray:
    """Ascending coefficients ``[a_0, ..., a_{n-1}, 1]`` of ``prod (s - lambda_i)``.

    Roots are multiplied in one at a time with ``a_k <- -lambda a_k + a_{k-1}``.
    An empty spectrum gives ``[1]``.
    """
    r = np.asarray(roots)
    c = np.ones(1, dtype=complex if np.iscomplexobj(r) else float)
    for lam in r:
        shifted = np.zeros(c.size + 1, dtype=c.dtype)
        shifted[1:] = c
        shifted[:-1] -= lam * c
        c = shifted
    if np.iscomplexobj(c):
        scale = max(1.0, float(np.max(np.abs(c))))
        if np.all(np.abs(c.imag) <= 1e-9 * scale):
            c = c.real.copy()
    return c


def gains_from_roots(roots) -> np.ndarray:
    """Companion gains ``[a_0, ..., a_{n-1}]`` for the given characteristic roots.

    Repeated and complex-conjugate roots are allowed; a conjugate-closed
    spectrum yields real gains.

    >>> gains_from_roots([-1.0, -2.0, -3.0])
    array([ 6., 11.,  6.])
    """
    r = as_roots(roots)
    return monic_coefficients(r)[:-1]


def extended_gain(coefficients, k: int) -> float:
    """``a_k`` with the conventions ``a_n = 1`` and ``a_k = 0`` outside ``[0, n]``.

    ``coefficients`` are the n gains ``[a_0, ..., a_{n-1}]``.
    """
    n = len(coefficients)
    if k == n:
        return 1.0
    if k < 0 or k > n:
        return 0.0
    return coefficients[k]


def companion_from_gains(gains) -> np.ndarray:
    """Companion matrix with identity super-diagonal and last row ``-gains``."""
    a = np.atleast_1d(np.asarray(gains, dtype=float))
    if a.ndim != 1 or a.size == 0:
        raise InvalidInputError("need at least one gain")
    if not np.all(np.isfinite(a)):
        raise InvalidInputError("gains must be finite")
    n = a.size
    A = np.zeros((n, n))
    A[np.arange(n - 1), np.arange(1, n)] = 1.0
    A[-1, :] = -a
    return A


def companion_matrix(roots) -> np.ndarray:
    """Companion matrix whose eigenvalues are ``roots``.

    >>> companion_matrix([-1.0, -2.0])
    array([[ 0.,  1.],
           [-2., -3.]])
    """
    gains = gains_from_roots(roots)
    if np.iscomplexobj(gains):
        raise DomainError("roots must be closed under conjugation for a real companion matrix")
    return companion_from_gains(gains)


def roots_from_gains(gains) -> RootSpectrum:
    """Characteristic roots of ``s^n + sum_k a_k s^k``, sorted ascending.

    Computed as eigenvalues of the companion matrix. Complex results are kept
    complex (sorted by real then imaginary part); callers that need real roots
    should check :attr:`RootSpectrum.is_real`.
    """
    A = companion_from_gains(gains)
    try:
        ev = np.linalg.eigvals(A)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigenvalue solver failed: {exc}") from exc
    if not np.all(np.isfinite(ev)):
        raise NumericalError("eigenvalue solver returned non-finite roots")
    scale = max(1.0, float(np.max(np.abs(ev))))
    if np.all(np.abs(ev.imag) <= _REAL_TOL * scale):
        return RootSpectrum(np.sort(ev.real))
    ev = ev.copy()
    ev.imag[np.abs(ev.imag) <= _REAL_TOL * scale] = 0.0
    order = np.lexsort((ev.imag, ev.real))
    return RootSpectrum(ev[order])


def coefficients_excluding(roots, exclude_index: int) -> np.ndarray:
    """Monic coefficients of the spectrum with root ``exclude_index`` removed.

    The result has length n: ``[a_0, ..., a_{n-2}, 1]`` for the remaining
    n - 1 roots, so removing the only root gives ``[1.]``.
    """
    r = as_roots(roots)
    if not 0 <= exclude_index < r.size:
        raise InvalidInputError(f"exclude_index {exclude_index} out of range for {r.size} roots")
    return monic_coefficients(np.delete(r, exclude_index))


def exclude_max(roots) -> tuple[np.ndarray, np.ndarray]:
    """Drop one instance (the first) of the largest root.

    Returns the remaining roots and their monic coefficients (length n,
    last entry 1).

    >>> rest, coef = exclude_max([-1.0, -2.0, -3.0])
    >>> rest, coef
    (array([-2., -3.]), array([6., 5., 1.]))
    """
    r = as_roots(roots, allow_complex=False)
    i = int(np.argmax(r))
    return np.delete(r, i), coefficients_excluding(r, i)
