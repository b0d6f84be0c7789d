"""Companion trajectories: two closed forms and a fixed-step RK4 oracle.

A companion state is an ``(n, d)`` array whose row k is the k-th time
derivative of the d-dimensional position.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .basis import exponential_basis, vandermonde_basis, vandermonde_inverse
from .companion import DEFAULT_DISTINCT_TOL, as_roots, companion_matrix
from .errors import ConfigurationError, InvalidInputError

# RK4 refuses steps with |lambda_min| * h above this.
MAX_STIFF_STEP = 0.1


def as_state(state, order: int | None = None) -> np.ndarray:
    """Coerce to a finite ``(n, d)`` float array; 1-D input is a 1-D system."""
    xi = np.asarray(state, dtype=float)
    if xi.ndim == 1:
        xi = xi[:, None]
    if xi.ndim != 2 or xi.shape[0] == 0 or xi.shape[1] == 0:
        raise InvalidInputError(f"state must be an (n, d) array, got shape {xi.shape}")
    if not np.all(np.isfinite(xi)):
        raise InvalidInputError("state entries must be finite")
    if order is not None and xi.shape[0] != order:
        raise InvalidInputError(f"state has {xi.shape[0]} rows but the system order is {order}")
    return xi


def exponential_coefficients(roots, state, tol: float = DEFAULT_DISTINCT_TOL) -> np.ndarray:
    """Rows of ``V^{-1} xi0``: the coefficient of ``e^{lambda_k t}`` for each root."""
    r = as_roots(roots)
    xi = as_state(state, r.size)
    return vandermonde_inverse(r, tol) @ xi


def trajectory_exponential(roots, state, t, tol: float = DEFAULT_DISTINCT_TOL) -> np.ndarray:
    """``x(t) = sum_k w_k e^{lambda_k t}``; shape ``t.shape + (d,)``."""
    w = exponential_coefficients(roots, state, tol)
    x = exponential_basis(roots, t) @ w
    return x.real if np.iscomplexobj(x) else x


def trajectory_vandermonde(roots, state, t, tol: float = DEFAULT_DISTINCT_TOL) -> np.ndarray:
    """``x(t) = sum_k v_k(t) x0^(k)``; shape ``t.shape + (d,)``."""
    r = as_roots(roots)
    xi = as_state(state, r.size)
    x = vandermonde_basis(r, t, tol) @ xi
    return x.real if np.iscomplexobj(x) else x


@dataclass(frozen=True)
class Trajectory:
    """Sampled companion trajectory: ``states[i]`` is the (n, d) state at ``times[i]``."""

    times: np.ndarray
    states: np.ndarray

    @property
    def positions(self) -> np.ndarray:
        return self.states[:, 0, :]

    def __len__(self):
        return self.times.size


def rk4_propagator(A: np.ndarray, h: float) -> np.ndarray:
    """One classical RK4 step for ``xi' = A xi`` as a matrix.

    For a linear autonomous field the four stages combine into
    ``I + hA + (hA)^2/2 + (hA)^3/6 + (hA)^4/24``.
    """
    n = A.shape[0]
    hA = h * A
    M = np.eye(n)
    term = np.eye(n)
    for k in range(1, 5):
        term = term @ hA / k
        M = M + term
    return M


def rk4_step(A: np.ndarray, xi: np.ndarray, h: float) -> np.ndarray:
    """Stage-by-stage RK4 step; reference for :func:`rk4_propagator`."""
    k1 = A @ xi
    k2 = A @ (xi + 0.5 * h * k1)
    k3 = A @ (xi + 0.5 * h * k2)
    k4 = A @ (xi + h * k3)
    return xi + h / 6.0 * (k1 + 2 * k2 + 2 * k3 + k4)


def integrate_trajectory(roots, state, t_end: float, n_steps: int, substeps: int = 1) -> Trajectory:
    """Fixed-step RK4 integration of the companion state.

    The companion matrix acts on the (n, d) state from the left, i.e. each
    spatial coordinate is an independent n-dimensional system. Output is
    recorded every ``substeps`` RK4 steps, so ``n_steps + 1`` samples on
    ``[0, t_end]`` with internal step ``t_end / (n_steps * substeps)``.

    Raises :class:`ConfigurationError` if ``|lambda_min| * h > 0.1``.
    """
    r = as_roots(roots)
    xi = as_state(state, r.size)
    if not np.isfinite(t_end) or t_end <= 0:
        raise ConfigurationError("t_end must be positive")
    if n_steps < 10:
        raise ConfigurationError("n_steps must be at least 10")
    if substeps < 1:
        raise ConfigurationError("substeps must be at least 1")
    h = t_end / (n_steps * substeps)
    stiffness = float(np.max(np.abs(r))) * h
    if stiffness > MAX_STIFF_STEP:
        raise ConfigurationError(
            f"RK4 step {h:.3g} too large for |lambda_min| = {np.max(np.abs(r)):.3g} "
            f"(|lambda_min| h = {stiffness:.3g} > {MAX_STIFF_STEP}); increase n_steps or substeps"
        )
    A = companion_matrix(r)
    M = np.linalg.matrix_power(rk4_propagator(A, h), substeps)
    states = np.empty((n_steps + 1,) + xi.shape)
    states[0] = xi
    for i in range(n_steps):
        states[i + 1] = M @ states[i]
    times = np.linspace(0.0, t_end, n_steps + 1)
    return Trajectory(times, states)


def substeps_for(roots, t_end: float, n_steps: int, stiffness: float = 1e-2) -> int:
    """Smallest substep count giving ``|lambda_min| * h <= stiffness``."""
    r = as_roots(roots)
    h_out = t_end / n_steps
    return max(1, int(np.ceil(h_out * float(np.max(np.abs(r))) / stiffness)))


def default_horizon(roots, span: float = 30.0) -> float:
    """``span / |lambda_max|``: the slowest mode has decayed by ``e^-span``."""
    r = as_roots(roots)
    slowest = float(np.min(np.abs(r.real)))
    if slowest <= 0:
        raise InvalidInputError("horizon undefined for a root with zero real part")
    return span / slowest
