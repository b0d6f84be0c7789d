"""Minimal SVG output: ratio-vs-parameter plots and 2-D bound overlays."""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

import numpy as np

from .ellipsoid import Ellipsoid
from .geometry import convex_hull

WIDTH, HEIGHT, MARGIN = 640, 420, 60
COLORS = {"vandermonde": "#1f77b4", "exponential": "#d62728", "lyapunov": "#2ca02c",
          "ratio_vl": "#1f77b4", "ratio_el": "#d62728", "ratio_ve": "#9467bd",
          "trajectory": "#222222"}


def _header(title: str) -> list[str]:
    return [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2}" y="24" text-anchor="middle" font-family="sans-serif" '
        f'font-size="15">{escape(title)}</text>',
    ]


class _Frame:
    """Maps data coordinates to the plotting area."""

    def __init__(self, xlim, ylim, equal=False):
        (x0, x1), (y0, y1) = xlim, ylim
        if x1 <= x0:
            x0, x1 = x0 - 0.5, x1 + 0.5
        if y1 <= y0:
            y0, y1 = y0 - 0.5, y1 + 0.5
        w, h = WIDTH - 2 * MARGIN, HEIGHT - 2 * MARGIN
        sx, sy = w / (x1 - x0), h / (y1 - y0)
        if equal:
            sx = sy = min(sx, sy)
        self.x0, self.y0, self.sx, self.sy = x0, y0, sx, sy
        self.ox = MARGIN + (w - sx * (x1 - x0)) / 2
        self.oy = HEIGHT - MARGIN - (h - sy * (y1 - y0)) / 2

    def __call__(self, x, y):
        return self.ox + (x - self.x0) * self.sx, self.oy - (y - self.y0) * self.sy

    def path(self, pts) -> str:
        return " ".join(f"{px:.2f},{py:.2f}" for px, py in (self(x, y) for x, y in pts))


def _axes(frame: _Frame, xticks, yticks, xlabel: str, ylabel: str) -> list[str]:
    out = []
    left, bottom = MARGIN, HEIGHT - MARGIN
    out.append(f'<line x1="{left}" y1="{bottom}" x2="{WIDTH - MARGIN}" y2="{bottom}" stroke="black"/>')
    out.append(f'<line x1="{left}" y1="{MARGIN}" x2="{left}" y2="{bottom}" stroke="black"/>')
    for value, label in xticks:
        px, _ = frame(value, frame.y0)
        out.append(f'<line x1="{px:.2f}" y1="{bottom}" x2="{px:.2f}" y2="{bottom + 5}" stroke="black"/>')
        out.append(f'<text x="{px:.2f}" y="{bottom + 18}" text-anchor="middle" '
                   f'font-family="sans-serif" font-size="11">{escape(label)}</text>')
    for value, label in yticks:
        _, py = frame(frame.x0, value)
        out.append(f'<line x1="{left - 5}" y1="{py:.2f}" x2="{left}" y2="{py:.2f}" stroke="black"/>')
        out.append(f'<text x="{left - 8}" y="{py + 4:.2f}" text-anchor="end" '
                   f'font-family="sans-serif" font-size="11">{escape(label)}</text>')
    out.append(f'<text x="{WIDTH / 2}" y="{HEIGHT - 15}" text-anchor="middle" '
               f'font-family="sans-serif" font-size="12">{escape(xlabel)}</text>')
    out.append(f'<text x="15" y="{HEIGHT / 2}" text-anchor="middle" font-family="sans-serif" '
               f'font-size="12" transform="rotate(-90 15 {HEIGHT / 2})">{escape(ylabel)}</text>')
    return out


def _legend(items) -> list[str]:
    out = []
    for i, (name, color) in enumerate(items):
        y = MARGIN + 14 * i
        out.append(f'<line x1="{WIDTH - MARGIN - 120}" y1="{y}" x2="{WIDTH - MARGIN - 100}" '
                   f'y2="{y}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{WIDTH - MARGIN - 95}" y="{y + 4}" font-family="sans-serif" '
                   f'font-size="11">{escape(name)}</text>')
    return out


def sweep_plot(summaries, config=None) -> str:
    """Geometric-mean ratios against the sweep parameter, log-scale y axis."""
    series: dict[str, list[tuple[float, float]]] = {}
    for s in summaries:
        if np.isfinite(s.geometric_mean) and s.geometric_mean > 0:
            series.setdefault(s.column, []).append((s.lambda_param, math.log10(s.geometric_mean)))
    title = "bound measure ratios (geometric mean)"
    if config is not None:
        title += f": {config.scheme}, n={config.order}, d={config.dim}"
    out = _header(title)
    pts = [p for v in series.values() for p in v]
    if pts:
        xs, ys = zip(*pts)
        lo, hi = math.floor(min(ys)), math.ceil(max(ys))
        frame = _Frame((min(xs), max(xs)), (lo, max(hi, lo + 1)))
        xt = [(x, f"{x:g}") for x in sorted(set(xs))]
        if len(xt) > 10:
            xt = xt[:: math.ceil(len(xt) / 10)]
        yt = [(e, f"1e{e}") for e in range(lo, max(hi, lo + 1) + 1)]
        out += _axes(frame, xt, yt, "sweep parameter lambda", "ratio (log scale)")
        for name, data in series.items():
            data.sort()
            color = COLORS.get(name, "black")
            out.append(f'<polyline fill="none" stroke="{color}" stroke-width="2" '
                       f'points="{frame.path(data)}"/>')
            for x, y in data:
                px, py = frame(x, y)
                out.append(f'<circle cx="{px:.2f}" cy="{py:.2f}" r="3" fill="{color}"/>')
        out += _legend([(k, COLORS.get(k, "black")) for k in series])
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _outline(shape) -> np.ndarray:
    if isinstance(shape, Ellipsoid):
        pts = shape.boundary_points(128)
        return np.vstack([pts, pts[:1]])
    verts = shape.vertices if hasattr(shape, "vertices") else np.asarray(shape)
    hull = convex_hull(verts)
    return np.vstack([hull.vertices, hull.vertices[:1]])


def bounds_overlay(shapes: dict, trajectory=None, title: str = "trajectory bounds") -> str:
    """2-D overlay of named bounds (simplexes or ellipsoids) and a trajectory."""
    outlines = {name: _outline(s) for name, s in shapes.items()}
    for name, o in outlines.items():
        if o.shape[1] != 2:
            raise ValueError(f"overlay needs 2-D shapes, {name} is {o.shape[1]}-D")
    pts = [o for o in outlines.values()]
    traj = None
    if trajectory is not None:
        traj = np.asarray(getattr(trajectory, "positions", trajectory), dtype=float)
        pts.append(traj)
    allpts = np.vstack(pts)
    lo, hi = allpts.min(axis=0), allpts.max(axis=0)
    pad = 0.05 * max(float(np.max(hi - lo)), 1e-12)
    frame = _Frame((lo[0] - pad, hi[0] + pad), (lo[1] - pad, hi[1] + pad), equal=True)
    out = _header(title)
    ticks = lambda a, b: [(v, f"{v:.3g}") for v in np.linspace(a, b, 5)]
    out += _axes(frame, ticks(lo[0], hi[0]), ticks(lo[1], hi[1]), "x1", "x2")
    for name, o in outlines.items():
        color = COLORS.get(name, "black")
        out.append(f'<polygon fill="{color}" fill-opacity="0.12" stroke="{color}" '
                   f'stroke-width="1.5" points="{frame.path(o)}"/>')
    if traj is not None:
        out.append(f'<polyline fill="none" stroke="{COLORS["trajectory"]}" stroke-width="1.5" '
                   f'points="{frame.path(traj)}"/>')
        px, py = frame(*traj[0])
        out.append(f'<circle cx="{px:.2f}" cy="{py:.2f}" r="3" fill="{COLORS["trajectory"]}"/>')
    legend = [(k, COLORS.get(k, "black")) for k in outlines]
    if traj is not None:
        legend.append(("trajectory", COLORS["trajectory"]))
    out += _legend(legend)
    out.append("</svg>")
    return "\n".join(out) + "\n"
