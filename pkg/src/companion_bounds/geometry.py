"""Convex hulls, areas/volumes and containment in 2-D and 3-D.

Point sets are first reduced to their affine hull (via SVD), so a triangle
living in 3-D is handled as a flagged, lower-dimensional polygon. Inside the
affine hull the convex hull is built with Andrew's monotone chain (2-D) or an
incremental algorithm with horizon-edge tracking (3-D).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .ellipsoid import Ellipsoid
from .errors import InvalidInputError

AFFINE_RTOL = 1e-10
DEDUP_RTOL = 1e-12


@dataclass(frozen=True)
class ConvexPolytope:
    """Convex hull of a finite point set.

    ``origin`` and the orthonormal columns of ``basis`` span the affine hull;
    facets are stored in those local coordinates as ``normals @ y <= offsets``.
    In the full-dimensional 2-D case ``vertices`` are in counter-clockwise
    order; in 3-D ``faces`` index ``vertices`` with outward orientation.
    """

    dim: int
    vertices: np.ndarray
    affine_dim: int
    origin: np.ndarray
    basis: np.ndarray
    normals: np.ndarray
    offsets: np.ndarray
    faces: tuple = ()

    @property
    def degenerate(self) -> bool:
        return self.affine_dim < self.dim

    @property
    def scale(self) -> float:
        return float(np.max(np.linalg.norm(self.vertices, axis=1)))

    @property
    def local_vertices(self) -> np.ndarray:
        return (self.vertices - self.origin) @ self.basis

    def signed_distance(self, x) -> np.ndarray:
        """Max of the distance to the affine hull and the facet excesses.

        Nonpositive for points inside (facet part), positive outside.
        Accepts ``(d,)`` or ``(k, d)``.
        """
        x = np.asarray(x, dtype=float)
        pts = np.atleast_2d(x)
        if pts.shape[1] != self.dim:
            raise InvalidInputError(f"points have dimension {pts.shape[1]}, hull is {self.dim}-D")
        rel = pts - self.origin
        y = rel @ self.basis
        if self.degenerate:
            off = np.linalg.norm(rel - y @ self.basis.T, axis=1)
        else:
            off = np.full(len(pts), -np.inf)
        if self.normals.size:
            inner = np.max(y @ self.normals.T - self.offsets, axis=1)
        else:
            inner = np.zeros(len(pts))
        dist = np.maximum(off, inner)
        return dist[0] if x.ndim == 1 else dist


def _cross2(o, a, b) -> float:
    return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0])


def monotone_chain(points, eps: float = 0.0) -> list[int]:
    """Indices of the 2-D hull in counter-clockwise order, collinear points dropped."""
    pts = np.asarray(points, dtype=float)
    order = sorted(range(len(pts)), key=lambda i: (pts[i, 0], pts[i, 1]))
    uniq = []
    for i in order:
        if uniq and np.all(np.abs(pts[i] - pts[uniq[-1]]) <= eps):
            continue
        uniq.append(i)
    if len(uniq) <= 2:
        return uniq
    area_tol = eps * float(np.max(np.abs(pts)))

    def half(seq):
        chain = []
        for i in seq:
            while len(chain) >= 2 and _cross2(pts[chain[-2]], pts[chain[-1]], pts[i]) <= area_tol:
                chain.pop()
            chain.append(i)
        return chain

    lower = half(uniq)
    upper = half(uniq[::-1])
    return lower[:-1] + upper[:-1]


def _hull3d(pts: np.ndarray, eps: float) -> list[tuple[int, int, int]]:
    """Incremental 3-D hull; returns outward-oriented triangles (index triples)."""
    n = len(pts)
    i0 = int(np.argmin(pts[:, 0]))
    i1 = int(np.argmax(np.linalg.norm(pts - pts[i0], axis=1)))
    line = pts[i1] - pts[i0]
    line /= np.linalg.norm(line)
    rel = pts - pts[i0]
    perp = rel - np.outer(rel @ line, line)
    i2 = int(np.argmax(np.linalg.norm(perp, axis=1)))
    normal = np.cross(pts[i1] - pts[i0], pts[i2] - pts[i0])
    normal /= np.linalg.norm(normal)
    i3 = int(np.argmax(np.abs(rel @ normal)))
    simplex = [i0, i1, i2, i3]
    interior = pts[simplex].mean(axis=0)

    def oriented(a, b, c):
        nrm = np.cross(pts[b] - pts[a], pts[c] - pts[a])
        return (a, b, c) if nrm @ (interior - pts[a]) < 0 else (a, c, b)

    faces = {oriented(*f) for f in [(i0, i1, i2), (i0, i1, i3), (i0, i2, i3), (i1, i2, i3)]}

    def plane(face):
        a, b, c = face
        nrm = np.cross(pts[b] - pts[a], pts[c] - pts[a])
        return nrm / np.linalg.norm(nrm), pts[a]

    planes = {f: plane(f) for f in faces}
    for p in range(n):
        if p in simplex:
            continue
        visible = [f for f in faces if planes[f][0] @ (pts[p] - planes[f][1]) > eps]
        if not visible:
            continue
        edges = set()
        for a, b, c in visible:
            edges.update([(a, b), (b, c), (c, a)])
        horizon = [(u, v) for (u, v) in edges if (v, u) not in edges]
        for f in visible:
            faces.discard(f)
            del planes[f]
        for u, v in horizon:
            f = (u, v, p)
            faces.add(f)
            planes[f] = plane(f)
    return sorted(faces)


def convex_hull(points) -> ConvexPolytope:
    """Convex hull of ``points`` (shape ``(k, d)``, d in 1..3).

    Inputs whose affine hull has lower dimension than d give a polytope with
    ``degenerate`` set and facets in the lower-dimensional coordinates.
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.ndim != 2 or pts.shape[0] == 0:
        raise InvalidInputError("need at least one point")
    if not np.all(np.isfinite(pts)):
        raise InvalidInputError("points must be finite")
    d = pts.shape[1]
    if d > 3:
        raise InvalidInputError("convex hulls are supported for dimension <= 3")
    scale = float(np.max(np.abs(pts)))
    centroid = pts.mean(axis=0)
    _, s, vt = np.linalg.svd(pts - centroid, full_matrices=False)
    k = int(np.sum(s > AFFINE_RTOL * scale)) if scale > 0 else 0
    basis = vt[:k].T if k else np.zeros((d, 0))
    y = (pts - centroid) @ basis
    eps = DEDUP_RTOL * max(scale, np.finfo(float).tiny)

    faces: tuple = ()
    if k == 0:
        idx = [0]
        normals = np.zeros((0, 0))
        offsets = np.zeros(0)
    elif k == 1:
        lo, hi = int(np.argmin(y[:, 0])), int(np.argmax(y[:, 0]))
        idx = [lo, hi]
        normals = np.array([[-1.0], [1.0]])
        offsets = np.array([-y[lo, 0], y[hi, 0]])
    elif k == 2:
        idx = monotone_chain(y, eps)
        loop = y[idx]
        edge = np.roll(loop, -1, axis=0) - loop
        normals = np.column_stack([edge[:, 1], -edge[:, 0]])
        normals /= np.linalg.norm(normals, axis=1, keepdims=True)
        offsets = np.einsum("ij,ij->i", normals, loop)
    else:
        tri = _hull3d(y, eps)
        idx = sorted({i for f in tri for i in f})
        remap = {old: new for new, old in enumerate(idx)}
        faces = tuple(tuple(remap[i] for i in f) for f in tri)
        nrm = []
        for a, b, c in tri:
            v = np.cross(y[b] - y[a], y[c] - y[a])
            nrm.append(v / np.linalg.norm(v))
        normals = np.array(nrm)
        offsets = np.einsum("ij,ij->i", normals, y[[f[0] for f in tri]])
    return ConvexPolytope(d, pts[idx].copy(), k, centroid, basis, normals, offsets, faces)


def polytope_measure(P: ConvexPolytope) -> float:
    """Area (2-D) or volume (3-D) of the hull; 0 for degenerate hulls."""
    if P.degenerate:
        return 0.0
    y = P.local_vertices
    if P.dim == 1:
        return float(y.max() - y.min())
    if P.dim == 2:
        xs, ys = y[:, 0], y[:, 1]
        return float(0.5 * abs(np.dot(xs, np.roll(ys, -1)) - np.dot(ys, np.roll(xs, -1))))
    center = y.mean(axis=0)
    vol = 0.0
    for a, b, c in P.faces:
        vol += abs(np.linalg.det(np.array([y[a] - center, y[b] - center, y[c] - center]))) / 6.0
    return float(vol)


def unit_ball_measure(m: int) -> float:
    return math.pi ** (m / 2) / math.gamma(m / 2 + 1)


def ellipsoid_measure(E: Ellipsoid) -> float:
    """``omega_m r^m sqrt(det Q)``: pi r^2 sqrt(det Q) in 2-D, 4/3 pi r^3 sqrt(det Q) in 3-D."""
    w = np.linalg.eigvalsh(E.shape)
    w = np.clip(w, 0.0, None)
    if np.any(w <= 1e-14 * max(1.0, w.max())):
        return 0.0
    return float(unit_ball_measure(E.dim) * E.radius ** E.dim * np.sqrt(np.prod(w)))


def measure(shape) -> float:
    if isinstance(shape, Ellipsoid):
        return ellipsoid_measure(shape)
    return polytope_measure(shape)


def relative_violation(shape, x) -> np.ndarray:
    """Scale-free excess of ``x`` outside ``shape`` (<= 0 means inside)."""
    x = np.asarray(x, dtype=float)
    if isinstance(shape, Ellipsoid):
        return shape.violation(x)
    dist = shape.signed_distance(x)
    denom = 1.0 + np.linalg.norm(np.atleast_2d(x), axis=1) + shape.scale
    return dist / (denom[0] if x.ndim == 1 else denom)


def contains(shape, x, tol: float = 1e-9):
    """Point membership with tolerance ``tol * (1 + ||x|| + scale)``."""
    if isinstance(shape, Ellipsoid):
        return shape.contains(x, tol)
    return relative_violation(shape, x) <= tol
