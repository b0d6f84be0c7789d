"""Command-line interface: ``bound``, ``verify`` and ``sweep`` subcommands.

Exit codes: 0 success, 1 containment violation, 2 invalid input,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import numpy as np

from .companion import as_roots
from .ellipsoid import Ellipsoid
from .errors import InvalidInputError, NumericalError
from .experiments import (
    ExperimentConfig, build_bound, emit_outputs, parse_lambda_grid, run_accuracy_sweep,
    summarize, verify_containment,
)
from .geometry import convex_hull, measure
from .svg import bounds_overlay

EXIT_OK, EXIT_VIOLATION, EXIT_INVALID, EXIT_NUMERICAL = 0, 1, 2, 3
BOUND_KINDS = ("vandermonde", "exponential", "lyapunov")


class _Parser(argparse.ArgumentParser):
    """Argument errors exit with the invalid-input code."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def parse_roots(text: str) -> np.ndarray:
    try:
        values = [complex(v.replace(" ", "")) for v in text.split(",") if v.strip()]
    except ValueError as exc:
        raise InvalidInputError(f"cannot parse roots {text!r}") from exc
    arr = np.array(values)
    if np.all(arr.imag == 0):
        arr = arr.real
    return as_roots(arr)


def _parse_rows(lines, source: str) -> np.ndarray:
    rows = []
    for line in lines:
        line = line.split("#", 1)[0].replace(",", " ").strip()
        if line:
            try:
                rows.append([float(v) for v in line.split()])
            except ValueError as exc:
                raise InvalidInputError(f"{source}: non-numeric entry in {line!r}") from exc
    if not rows:
        raise InvalidInputError(f"{source}: no state rows")
    if len({len(r) for r in rows}) != 1:
        raise InvalidInputError(f"{source}: rows have different lengths")
    return np.array(rows)


def parse_state(text: str, dim: int | None = None) -> np.ndarray:
    """Read a state from a file path, or inline as rows split by ``;``.

    Inline ``"1,0;0,1"`` is two rows (x0, x0') of two coordinates. A single
    inline row together with ``dim`` is reshaped into rows of ``dim`` values.
    """
    path = Path(text)
    if path.is_file():
        try:
            state = _parse_rows(path.read_text().splitlines(), str(path))
        except OSError as exc:
            raise InvalidInputError(f"cannot read {path}: {exc.strerror}") from exc
    else:
        state = _parse_rows(text.split(";"), "inline state")
    if dim is not None:
        if state.size % dim:
            raise InvalidInputError(f"{state.size} state entries do not split into rows of {dim}")
        state = state.reshape(-1, dim)
    return state


def parse_decay(text: str | None):
    if text is None or text == "identity":
        return None
    path = Path(text)
    if not path.is_file():
        raise InvalidInputError(f"decay matrix file {text!r} not found")
    return _parse_rows(path.read_text().splitlines(), str(path))


def _fmt_matrix(M, indent="  ") -> str:
    return "\n".join(indent + " ".join(f"{v: .10g}" for v in row) for row in np.atleast_2d(M))


def _write(path, text: str) -> None:
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write {path}: {exc.strerror}") from exc


def cmd_bound(args) -> int:
    roots = parse_roots(args.roots)
    state = parse_state(args.state, args.dim)
    shape = build_bound(args.kind, roots, state, parse_decay(args.decay))
    if isinstance(shape, Ellipsoid):
        print(f"{args.kind} ellipsoid in {shape.dim}-D")
        print("center:")
        print(_fmt_matrix(shape.center))
        print("shape:")
        print(_fmt_matrix(shape.shape))
        print(f"radius: {shape.radius:.12g}")
        hull_or_shape = shape
    else:
        print(f"{args.kind} simplex, {shape.order + 1} vertices in {shape.dim}-D")
        print("vertices:")
        print(_fmt_matrix(shape.vertices))
        hull_or_shape = convex_hull(shape.vertices) if shape.dim <= 3 else None
    if hull_or_shape is not None:
        print(f"measure: {measure(hull_or_shape):.12g}")
    if args.svg:
        _write(args.svg, bounds_overlay({args.kind: shape}, title=f"{args.kind} bound"))
        print(f"wrote {args.svg}")
    return EXIT_OK


def cmd_verify(args) -> int:
    roots = parse_roots(args.roots)
    state = parse_state(args.state, args.dim)
    report = verify_containment(roots, state, args.kinds, args.horizon, args.grid, args.tol,
                                parse_decay(args.decay))
    for line in report.lines():
        print(line)
    if args.svg:
        shapes = {a.kind: a.shape for a in report.audits if a.shape is not None}
        _write(args.svg, bounds_overlay(shapes, report.trajectory, "containment audit"))
        print(f"wrote {args.svg}")
    if all(a.error is not None for a in report.audits):
        raise InvalidInputError("no bound could be constructed for these roots")
    print("PASS" if report.passed else "FAIL")
    return EXIT_OK if report.passed else EXIT_VIOLATION


def cmd_sweep(args) -> int:
    config = ExperimentConfig(scheme=args.scheme, order=args.order, dim=args.dim,
                              lambdas=parse_lambda_grid(args.lambda_grid), trials=args.trials,
                              seed=args.seed, workers=args.workers)
    records = run_accuracy_sweep(config)
    emit_outputs(records, args.out, args.svg, config)
    print(f"{'lambda':>8} {'column':>9} {'gmean':>12} {'median':>12} {'degenerate':>10}")
    for s in summarize(records):
        print(f"{s.lambda_param:>8g} {s.column:>9} {s.geometric_mean:>12.4e} "
              f"{s.median:>12.4e} {s.degenerate_rate:>10.2f}")
    print(f"wrote {args.out}" + (f" and {args.svg}" if args.svg else ""))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="companion-bounds",
                     description="Convex trajectory bounds for linear companion systems.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("bound", help="compute one bound")
    p.add_argument("--kind", choices=BOUND_KINDS, required=True)
    p.add_argument("--roots", required=True, help="comma-separated roots, e.g. -1,-2")
    p.add_argument("--state", required=True, help="state file or inline rows '1,0;0,1'")
    p.add_argument("--dim", type=int, default=None)
    p.add_argument("--decay", default="identity", help="'identity' or a matrix file")
    p.add_argument("--svg", default=None)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("verify", help="audit containment along an RK4 trajectory")
    p.add_argument("--roots", required=True)
    p.add_argument("--state", required=True)
    p.add_argument("--dim", type=int, default=None)
    p.add_argument("--horizon", type=float, default=None, help="default 30/|slowest root|")
    p.add_argument("--grid", type=int, default=300)
    p.add_argument("--tol", type=float, default=1e-6)
    p.add_argument("--kinds", nargs="+", choices=BOUND_KINDS, default=list(BOUND_KINDS))
    p.add_argument("--decay", default="identity")
    p.add_argument("--svg", default=None)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("sweep", help="bound-accuracy sweep written to CSV")
    p.add_argument("--scheme", choices=("identical", "uniform-band"), required=True)
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--lambda-grid", required=True, help="a:b:step or comma list")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.add_argument("--svg", default=None)
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InvalidInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
