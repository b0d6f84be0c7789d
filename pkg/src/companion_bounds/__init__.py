"""Convex trajectory bounds for linear companion systems."""

from .basis import (
    exponential_basis, vandermonde_basis, vandermonde_basis_cramer, vandermonde_det,
    vandermonde_det_product, vandermonde_inverse, vandermonde_matrix,
)
from .bounds import SimplexBound, exponential_simplex, simplicial_bound, vandermonde_simplex
from .companion import (
    RootSpectrum, companion_matrix, gains_from_roots, monic_coefficients, roots_from_gains,
)
from .ellipsoid import Ellipsoid, ellipsoid_affine_transform, ellipsoid_project, point_project
from .errors import (
    CompanionError, ConfigurationError, DomainError, InvalidInputError, NumericalError,
    SingularityError,
)
from .experiments import ExperimentConfig, run_accuracy_sweep, verify_containment
from .geometry import ConvexPolytope, convex_hull, measure
from .lyapunov import projected_lyapunov_ellipsoid, solve_lyapunov
from .trajectory import Trajectory, integrate_trajectory, trajectory_exponential

__all__ = [name for name in dir() if not name.startswith("_")]
