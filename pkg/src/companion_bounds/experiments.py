"""Bound-accuracy sweeps and containment audits.

Two root schemes are supported:

* ``identical``: all n roots equal to the sweep parameter. Only the
  Vandermonde simplex and the Lyapunov ellipsoid are defined; exponential
  columns are NaN.
* ``uniform-band``: n roots drawn uniformly between -0.5 and the sweep
  parameter, redrawn until pairwise distinct.

Initial states are uniform on ``[-1, 1]^{n d}`` and every trial draws from its
own generator seeded from ``(seed, sweep index, trial)``, so results do not
depend on execution order.
"""

from __future__ import annotations

import csv
import io
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path

import numpy as np

from .bounds import exponential_simplex, vandermonde_simplex
from .companion import DEFAULT_DISTINCT_TOL, as_roots, is_distinct
from .ellipsoid import Ellipsoid
from .errors import CompanionError, ConfigurationError, InvalidInputError
from .geometry import convex_hull, ellipsoid_measure, polytope_measure, relative_violation
from .lyapunov import projected_lyapunov_ellipsoid, solve_lyapunov
from .trajectory import as_state, default_horizon, integrate_trajectory, substeps_for

SCHEMES = ("identical", "uniform-band")
BAND_EDGE = -0.5
MAX_RESAMPLES = 10_000

CSV_COLUMNS = (
    "scheme", "order", "dim", "lambda_param", "trial", "seed",
    "vol_vandermonde", "vol_exponential", "vol_lyapunov",
    "ratio_vl", "ratio_el", "ratio_ve",
    "degenerate_v", "degenerate_e", "resamples",
)


def sample_initial_states(n: int, d: int, count: int, seed) -> np.ndarray:
    """``count`` companion states, i.i.d. uniform on ``[-1, 1]``; shape ``(count, n, d)``."""
    if count < 1:
        raise InvalidInputError("count must be at least 1")
    rng = np.random.default_rng(seed)
    return rng.uniform(-1.0, 1.0, size=(count, n, d))


def trial_seed(seed: int, point: int, trial: int) -> int:
    """Per-trial seed mixed from the master seed, sweep index and trial index."""
    return int(np.random.SeedSequence([seed, point, trial]).generate_state(1, np.uint64)[0])


def sample_roots(scheme: str, n: int, lam: float, rng: np.random.Generator,
                 tol: float = DEFAULT_DISTINCT_TOL) -> tuple[np.ndarray, int]:
    """Draw a root spectrum for one trial; returns ``(roots, resamples)``."""
    if scheme == "identical":
        return np.full(n, float(lam)), 0
    if scheme != "uniform-band":
        raise InvalidInputError(f"unknown root scheme {scheme!r}")
    lo, hi = sorted((BAND_EDGE, float(lam)))
    for resamples in range(MAX_RESAMPLES):
        roots = rng.uniform(lo, hi, size=n)
        if is_distinct(roots, tol):
            return roots, resamples
    raise ConfigurationError(f"could not draw {n} distinct roots in [{lo}, {hi}]")


def parse_lambda_grid(text: str) -> list[float]:
    """``"a:b:step"`` (inclusive of b), a comma list, or a single value."""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise InvalidInputError(f"lambda grid must be a:b:step, got {text!r}")
        a, b, step = (float(p) for p in parts)
        if step == 0 or (b - a) / step < -1e-12:
            raise InvalidInputError(f"step {step} does not lead from {a} to {b}")
        count = int(math.floor((b - a) / step + 1e-9)) + 1
        return [round(a + i * step, 12) for i in range(count)]
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise InvalidInputError(f"bad lambda grid {text!r}") from exc


@dataclass
class ExperimentConfig:
    """Settings of one accuracy sweep."""

    scheme: str = "identical"
    order: int = 2
    dim: int = 2
    lambdas: list = field(default_factory=lambda: [-1.0, -1.5, -2.0, -2.5, -3.0])
    trials: int = 200
    seed: int = 0
    decay: str = "identity"
    workers: int = 1

    def validate(self) -> None:
        if self.scheme not in SCHEMES:
            raise InvalidInputError(f"scheme must be one of {SCHEMES}")
        if self.order < 1 or self.dim < 1:
            raise InvalidInputError("order and dimension must be positive")
        if self.dim > 3:
            raise InvalidInputError("accuracy sweeps support dimensions up to 3")
        if self.trials < 1:
            raise InvalidInputError("trials must be at least 1")
        if not self.lambdas:
            raise InvalidInputError("the lambda grid is empty")
        if any(not np.isfinite(l) or l >= 0 for l in self.lambdas):
            raise InvalidInputError("sweep parameters must be negative")
        if self.decay != "identity":
            raise InvalidInputError("sweeps use the identity decay matrix")


@dataclass
class AccuracyRecord:
    """Measures of the three bounds for one trial."""

    scheme: str
    order: int
    dim: int
    lambda_param: float
    trial: int
    seed: int
    vol_vandermonde: float
    vol_exponential: float
    vol_lyapunov: float
    degenerate_v: bool
    degenerate_e: bool
    resamples: int

    @property
    def ratio_vl(self) -> float:
        return _ratio(self.vol_vandermonde, self.vol_lyapunov)

    @property
    def ratio_el(self) -> float:
        return _ratio(self.vol_exponential, self.vol_lyapunov)

    @property
    def ratio_ve(self) -> float:
        return _ratio(self.vol_vandermonde, self.vol_exponential)

    def row(self) -> dict:
        out = asdict(self)
        out.update(ratio_vl=self.ratio_vl, ratio_el=self.ratio_el, ratio_ve=self.ratio_ve)
        return {k: out[k] for k in CSV_COLUMNS}


def _ratio(num: float, den: float) -> float:
    if not (np.isfinite(num) and np.isfinite(den)) or den <= 0:
        return math.nan
    return num / den


def run_trial(config: ExperimentConfig, point: int, lam: float, trial: int) -> AccuracyRecord:
    """One sweep trial; bound failures become NaN measures rather than errors."""
    seed = trial_seed(config.seed, point, trial)
    rng = np.random.default_rng(seed)
    roots, resamples = sample_roots(config.scheme, config.order, lam, rng)
    state = rng.uniform(-1.0, 1.0, size=(config.order, config.dim))

    vol_v, degenerate_v = math.nan, False
    try:
        hull = convex_hull(vandermonde_simplex(roots, state).vertices)
        vol_v, degenerate_v = polytope_measure(hull), hull.degenerate
    except CompanionError:
        pass

    vol_e, degenerate_e = math.nan, False
    if config.scheme != "identical":
        try:
            hull = convex_hull(exponential_simplex(roots, state).vertices)
            vol_e, degenerate_e = polytope_measure(hull), hull.degenerate
        except CompanionError:
            pass

    try:
        vol_l = ellipsoid_measure(projected_lyapunov_ellipsoid(roots, state))
    except CompanionError:
        vol_l = math.nan

    return AccuracyRecord(config.scheme, config.order, config.dim, float(lam), trial, seed,
                          vol_v, vol_e, vol_l, bool(degenerate_v), bool(degenerate_e), resamples)


def _run_point(args):
    config, point, lam = args
    return [run_trial(config, point, lam, k) for k in range(config.trials)]


def run_accuracy_sweep(config: ExperimentConfig) -> list[AccuracyRecord]:
    """All trials of the sweep, ordered by sweep point and trial index."""
    config.validate()
    jobs = [(config, i, lam) for i, lam in enumerate(config.lambdas)]
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            chunks = list(pool.map(_run_point, jobs))
    else:
        chunks = [_run_point(job) for job in jobs]
    return [rec for chunk in chunks for rec in chunk]


def geometric_mean(values) -> float:
    """Geometric mean of the finite, nonnegative values; a zero makes it zero."""
    v = np.asarray([x for x in values if np.isfinite(x) and x >= 0], dtype=float)
    if v.size == 0:
        return math.nan
    if np.any(v == 0):
        return 0.0
    return float(np.exp(np.mean(np.log(v))))


@dataclass
class SweepSummary:
    lambda_param: float
    column: str
    count: int
    geometric_mean: float
    mean: float
    median: float
    q1: float
    q3: float
    degenerate_rate: float


def summarize(records, columns=("ratio_vl", "ratio_el", "ratio_ve")) -> list[SweepSummary]:
    """Per sweep point and ratio column: geometric mean, mean, median, quartiles."""
    out = []
    lambdas = sorted({r.lambda_param for r in records}, reverse=True)
    for lam in lambdas:
        group = [r for r in records if r.lambda_param == lam]
        for col in columns:
            vals = np.array([getattr(r, col) for r in group], dtype=float)
            finite = vals[np.isfinite(vals)]
            if col == "ratio_ve" or col == "ratio_el":
                degenerate = np.mean([r.degenerate_e for r in group])
            else:
                degenerate = np.mean([r.degenerate_v for r in group])
            if finite.size:
                q1, med, q3 = np.percentile(finite, [25, 50, 75])
                mean = float(finite.mean())
            else:
                q1 = med = q3 = mean = math.nan
            out.append(SweepSummary(lam, col, int(finite.size), geometric_mean(finite),
                                    mean, float(med), float(q1), float(q3), float(degenerate)))
    return out


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def records_to_csv(records, config: ExperimentConfig | None = None) -> str:
    """CSV text with a ``#`` metadata header followed by one row per trial."""
    buf = io.StringIO()
    if config is not None:
        buf.write(f"# scheme={config.scheme} order={config.order} dim={config.dim} "
                  f"trials={config.trials} seed={config.seed} decay={config.decay}\n")
        buf.write("# states uniform on [-1,1]^(n*d); aggregate=geometric-mean; "
                  "degenerate bounds have measure 0\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for rec in records:
        row = rec.row()
        writer.writerow([_fmt(row[c]) for c in CSV_COLUMNS])
    return buf.getvalue()


def emit_outputs(records, csv_path=None, svg_path=None, config=None) -> list[Path]:
    """Write the CSV and optional SVG summary plot; returns the written paths."""
    if not records:
        raise InvalidInputError("no records to write")
    from .svg import sweep_plot

    written = []
    for path, text in ((csv_path, lambda: records_to_csv(records, config)),
                       (svg_path, lambda: sweep_plot(summarize(records), config))):
        if path is None:
            continue
        path = Path(path)
        try:
            with open(path, "w", newline="") as fh:
                fh.write(text())
        except OSError as exc:
            raise OSError(f"cannot write {path}: {exc.strerror}") from exc
        written.append(path)
    return written


@dataclass
class BoundAudit:
    kind: str
    max_violation: float
    worst_time: float
    passed: bool
    measure: float = math.nan
    error: str | None = None
    shape: object = None


@dataclass
class AuditReport:
    roots: list
    horizon: float
    grid: int
    tol: float
    audits: list
    trajectory: object = None

    @property
    def passed(self) -> bool:
        return all(a.passed for a in self.audits if a.error is None)

    def lines(self) -> list[str]:
        out = [f"roots={self.roots} horizon={self.horizon:.6g} grid={self.grid} tol={self.tol:g}"]
        for a in self.audits:
            if a.error is not None:
                out.append(f"{a.kind:<12} skipped: {a.error}")
            else:
                status = "PASS" if a.passed else "FAIL"
                out.append(f"{a.kind:<12} {status} max_violation={a.max_violation:.3e} "
                           f"at t={a.worst_time:.4g} measure={a.measure:.6g}")
        return out


def audit_bound(kind: str, shape, trajectory, tol: float) -> BoundAudit:
    """Largest relative violation of the trajectory positions against ``shape``."""
    if not isinstance(shape, Ellipsoid):
        shape = convex_hull(shape.vertices if hasattr(shape, "vertices") else shape)
    viol = np.asarray(relative_violation(shape, trajectory.positions))
    i = int(np.argmax(viol))
    dim = shape.dim
    m = math.nan
    if dim <= 3:
        m = ellipsoid_measure(shape) if isinstance(shape, Ellipsoid) else polytope_measure(shape)
    return BoundAudit(kind, float(viol[i]), float(trajectory.times[i]), bool(viol[i] <= tol), m,
                      shape=shape)


def build_bound(kind: str, roots, state, decay=None, certificate=None):
    if kind == "vandermonde":
        return vandermonde_simplex(roots, state)
    if kind == "exponential":
        return exponential_simplex(roots, state)
    if kind == "lyapunov":
        return projected_lyapunov_ellipsoid(roots, state, decay, certificate)
    raise InvalidInputError(f"unknown bound kind {kind!r}")


def verify_containment(roots, state, kinds=("vandermonde", "exponential", "lyapunov"),
                       horizon=None, grid: int = 300, tol: float = 1e-6, decay=None,
                       trajectory=None) -> AuditReport:
    """Check RK4 trajectory samples against each requested bound.

    Bounds whose construction fails for the given roots (e.g. exponential
    simplex with repeated roots) are reported as skipped; use
    :attr:`AuditReport.passed` for the overall verdict.
    """
    r = as_roots(roots)
    xi = as_state(state, r.size)
    T = default_horizon(r) if horizon is None else float(horizon)
    if trajectory is None:
        trajectory = integrate_trajectory(r, xi, T, grid, substeps_for(r, T, grid))
    audits = []
    for kind in kinds:
        try:
            shape = build_bound(kind, r, xi, decay)
        except CompanionError as exc:
            audits.append(BoundAudit(kind, math.nan, math.nan, False, error=str(exc)))
            continue
        audits.append(audit_bound(kind, shape, trajectory, tol))
    return AuditReport(r.tolist(), T, grid, tol, audits, trajectory)


def lyapunov_certificate_cache(roots, dim, decay=None, cache=None):
    """Solve or fetch a Lyapunov certificate keyed by ``(roots, dim)``."""
    key = (tuple(np.asarray(roots).tolist()), dim)
    if cache is None:
        return solve_lyapunov(roots, dim, decay)
    if key not in cache:
        cache[key] = solve_lyapunov(roots, dim, decay)
    return cache[key]
