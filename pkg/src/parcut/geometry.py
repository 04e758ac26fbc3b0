"""Planar convex-polygon primitives.

Polygons live in two interchangeable forms: a counterclockwise vertex
list (`VPolygon`) and an irredundant half-plane description with unit
outward normals (`HPolygon`).  `canonicalize` converts either form (or a
raw half-plane system) into the canonical HPolygon: unit rows, sorted
counterclockwise by normal angle starting from the smallest angle in
[0, 2pi), every row supporting an edge.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EmptyInteriorError, UnboundedError
from .lp import OPTIMAL, small_lp
from .tolerance import DEFAULT_TOL, Tol


@dataclass(frozen=True)
class VPolygon:
    """Convex polygon as a counterclockwise vertex array (k x 2)."""

    vertices: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "vertices", np.asarray(self.vertices, dtype=float))


@dataclass(frozen=True)
class HPolygon:
    """Irredundant half-plane form {x : A x <= b}, unit outward normals.

    Rows are sorted counterclockwise by normal angle; `vertices[j]` is the
    corner where rows j and j+1 (cyclically) meet, so edge j runs from
    vertices[j-1] to vertices[j].
    """

    A: np.ndarray
    b: np.ndarray
    vertices: np.ndarray

    @property
    def m(self) -> int:
        return len(self.b)

    def contains(self, x, tol: Tol = DEFAULT_TOL, scale: float = 1.0) -> bool:
        return bool(np.all(self.A @ np.asarray(x) <= self.b + tol.slack(scale)))

    def validate(self, tol: Tol = DEFAULT_TOL) -> None:
        norms = np.linalg.norm(self.A, axis=1)
        assert np.all(np.abs(norms - 1.0) <= 1e-9), "normals must be unit"
        ang = np.arctan2(self.A[:, 1], self.A[:, 0]) % (2 * math.pi)
        assert np.all(np.diff(ang) > 0), "rows must be CCW sorted"


@dataclass(frozen=True)
class WidthResult:
    """Minimum width of a polygon and where it is achieved."""

    width: float
    direction: tuple[float, float]
    edge_index: int
    opposite_vertex: int


def _convex_hull_ccw(points: np.ndarray, tol: Tol) -> np.ndarray:
    """Monotone chain with strict turns; drops interior and collinear points."""
    pts = sorted({(float(p[0]), float(p[1])) for p in points})
    if len(pts) < 3:
        raise EmptyInteriorError("fewer than 3 distinct points")
    span = max(
        pts[-1][0] - pts[0][0],
        max(p[1] for p in pts) - min(p[1] for p in pts),
        1.0,
    )
    # Collinearity cutoff sits near machine precision on purpose: double
    # cross products carry ~1e-16 * span^2 of noise, while the thinnest
    # legitimate corners (regular 2^16-gon) are ~1e-12 * span^2.
    eps = 1e-14 * span * span

    def build(seq):
        out = []
        for p in seq:
            while len(out) >= 2:
                o, a = out[-2], out[-1]
                cross = (a[0] - o[0]) * (p[1] - o[1]) - (a[1] - o[1]) * (p[0] - o[0])
                if cross <= eps:
                    out.pop()
                else:
                    break
            out.append(p)
        return out

    lower = build(pts)
    upper = build(reversed(pts))
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:
        raise EmptyInteriorError("points are collinear")
    return np.array(hull)


def _intersect_rows(a1, b1, a2, b2):
    det = a1[0] * a2[1] - a1[1] * a2[0]
    if abs(det) < 1e-300:
        return None
    return np.array(
        [(b1 * a2[1] - b2 * a1[1]) / det, (a1[0] * b2 - a2[0] * b1) / det]
    )


def _finish_hpolygon(A: np.ndarray, b: np.ndarray) -> HPolygon:
    """Rotate rows to the canonical start and recompute corner vertices."""
    ang = np.arctan2(A[:, 1], A[:, 0]) % (2 * math.pi)
    start = int(np.argmin(ang))
    A = np.vstack([A[start:], A[:start]])
    b = np.concatenate([b[start:], b[:start]])
    m = len(b)
    verts = np.empty((m, 2))
    for j in range(m):
        k = (j + 1) % m
        v = _intersect_rows(A[j], b[j], A[k], b[k])
        if v is None:
            raise EmptyInteriorError("adjacent rows are parallel")
        verts[j] = v
    return HPolygon(A, b, verts)


def canonicalize(obj, tol: Tol = DEFAULT_TOL, interior=None) -> HPolygon:
    """Convert vertices, an (A, b) pair, or an HPolygon to canonical form.

    Raises EmptyInteriorError when the region is empty or has no interior
    and UnboundedError when the half-planes fail to bound it.  A known
    strictly interior point may be passed to skip the feasibility LP.
    """
    if isinstance(obj, HPolygon):
        return _canonicalize_rows(obj.A, obj.b, tol, interior)
    if isinstance(obj, VPolygon):
        return _canonicalize_vertices(obj.vertices, tol)
    if isinstance(obj, tuple) and len(obj) == 2:
        return _canonicalize_rows(
            np.asarray(obj[0], float), np.asarray(obj[1], float), tol, interior
        )
    return _canonicalize_vertices(np.asarray(obj, float), tol)


def _canonicalize_vertices(vertices: np.ndarray, tol: Tol) -> HPolygon:
    hull = _convex_hull_ccw(vertices, tol)
    k = len(hull)
    A = np.empty((k, 2))
    b = np.empty(k)
    for j in range(k):
        p, q = hull[j], hull[(j + 1) % k]
        d = q - p
        n = np.array([d[1], -d[0]])
        n /= np.linalg.norm(n)
        A[j] = n
        b[j] = n @ p
    return _finish_hpolygon(A, b)


def _canonicalize_rows(A: np.ndarray, b: np.ndarray, tol: Tol, interior=None) -> HPolygon:
    A = np.atleast_2d(np.asarray(A, float))
    b = np.asarray(b, float).ravel()
    if A.shape[0] != b.shape[0] or A.shape[1] != 2:
        raise ValueError("need an m x 2 matrix and an m-vector")

    keep_rows = []
    keep_off = []
    for a, off in zip(A, b):
        n = math.hypot(a[0], a[1])
        if n <= 1e-300:
            if off < -tol.slack(abs(off)):
                raise EmptyInteriorError("contradictory trivial row")
            continue  # 0.x <= b with b >= 0 says nothing
        if abs(n - 1.0) > tol.slack(1.0):
            keep_rows.append((a[0] / n, a[1] / n))
            keep_off.append(off / n)
        else:
            keep_rows.append((a[0], a[1]))
            keep_off.append(off)
    if not keep_rows:
        raise UnboundedError("no effective half-planes")

    # Feasibility / interior first (a contradictory system is EmptyInterior
    # even when it also fails to bound); the Chebyshev LP decides it unless
    # the caller already knows a strictly interior point.
    scale = max(1.0, max(abs(v) for v in keep_off))
    c = None
    if interior is not None:
        cand = np.asarray(interior, float)
        depths = [
            off - (a[0] * cand[0] + a[1] * cand[1])
            for a, off in zip(keep_rows, keep_off)
        ]
        if min(depths) > tol.slack(scale):
            c = cand
    if c is None:
        rows3 = [((a[0], a[1], 1.0), off) for a, off in zip(keep_rows, keep_off)]
        res = small_lp(rows3, (0.0, 0.0, 1.0), tol=tol)
        if res.status == OPTIMAL and res.value <= tol.slack(scale):
            raise EmptyInteriorError("region is empty or lower-dimensional")

    ang = sorted(math.atan2(a[1], a[0]) % (2 * math.pi) for a in keep_rows)
    gaps = [ang[(i + 1) % len(ang)] - ang[i] for i in range(len(ang) - 1)]
    gaps.append(2 * math.pi - (ang[-1] - ang[0]))
    if max(gaps) >= math.pi - 1e-12:
        raise UnboundedError("normals leave a half-plane uncovered")
    if c is None:
        if res.status != OPTIMAL:
            raise UnboundedError("interior direction escapes to infinity")
        c = np.array(res.point[:2])

    # Polar dual: row (a, b) -> point a / (b - a.c); irredundant rows are
    # exactly the hull vertices of the dual cloud, in matching CCW order.
    duals = []
    for i, (a, off) in enumerate(zip(keep_rows, keep_off)):
        depth = off - (a[0] * c[0] + a[1] * c[1])
        duals.append((a[0] / depth, a[1] / depth, i))
    hull = _convex_hull_ccw(np.array([(d[0], d[1]) for d in duals]), tol)
    hull_map: dict[tuple[float, float], int] = {}
    for x, y, i in duals:
        if (x, y) not in hull_map:
            hull_map[(x, y)] = i  # exact duplicates: lowest index wins
    hull_set = {(float(p[0]), float(p[1])) for p in hull}
    chosen = sorted(
        {hull_map[p] for p in hull_set},
        key=lambda i: math.atan2(keep_rows[i][1], keep_rows[i][0]) % (2 * math.pi),
    )

    A2 = np.array([keep_rows[i] for i in chosen])
    b2 = np.array([keep_off[i] for i in chosen])
    if len(chosen) < 3:
        raise EmptyInteriorError("degenerate region")
    return _finish_hpolygon(A2, b2)


def directional_width(P: VPolygon | HPolygon, v) -> float:
    """Extent of the polygon between supporting lines normal to v."""
    verts = P.vertices if isinstance(P, (VPolygon, HPolygon)) else np.asarray(P)
    proj = verts @ np.asarray(v, float)
    return float(proj.max() - proj.min())


def min_width(P: HPolygon) -> WidthResult:
    """Minimum width over all directions via rotating calipers.

    The minimizing direction is always one of the edge normals.
    """
    A, b, verts = P.A, P.b, P.vertices
    m = P.m
    proj0 = verts @ A[0]
    j = int(np.argmin(proj0))
    best = None
    for i in range(m):
        a = A[i]
        cur = a @ verts[j]
        # advance the antipodal pointer while the projection still drops
        for _ in range(m):
            nxt = a @ verts[(j + 1) % m]
            if nxt < cur:
                j = (j + 1) % m
                cur = nxt
            else:
                break
        w = b[i] - cur
        if best is None or w < best[0]:
            best = (float(w), i, j)
    w, i, j = best
    return WidthResult(w, (float(A[i, 0]), float(A[i, 1])), i, j)


def inner_body(P: HPolygon, t: float, tol: Tol = DEFAULT_TOL, interior=None) -> HPolygon | None:
    """Inner parallel body {A x <= b - t}, recanonicalized; None when empty.

    Edges of P may disappear, so the result can have fewer rows.  The
    incenter of P is interior to every nonempty inner body, so callers
    that know it can pass it to skip the feasibility LP.
    """
    if t < 0:
        raise ValueError("offset must be nonnegative")
    try:
        return _canonicalize_rows(P.A, P.b - t, tol, interior)
    except EmptyInteriorError:
        return None


def inradius_incenter(P: HPolygon, tol: Tol = DEFAULT_TOL, seed: int = 0):
    """Largest inscribed-disk radius and one center achieving it."""
    rows = [((a[0], a[1], 1.0), off) for a, off in zip(P.A, P.b)]
    rows.append(((0.0, 0.0, -1.0), 0.0))
    res = small_lp(rows, (0.0, 0.0, 1.0), tol=tol, seed=seed)
    if res.status != OPTIMAL:
        raise EmptyInteriorError("polygon has no inscribed disk")
    return float(res.value), (float(res.point[0]), float(res.point[1]))


def diameter(P: HPolygon) -> float:
    """Largest vertex-to-vertex distance (rotating calipers)."""
    verts = P.vertices.tolist()
    m = len(verts)
    if m == 1:
        return 0.0
    best = 0.0
    j = 1
    for i in range(m):
        px, py = verts[i]
        qx, qy = verts[(i + 1) % m]
        ex = qx - px
        ey = qy - py
        jx, jy = verts[j]
        while True:
            jn = j + 1 if j + 1 < m else 0
            nx, ny = verts[jn]
            if ex * (ny - jy) - ey * (nx - jx) > 0:
                j, jx, jy = jn, nx, ny
            else:
                break
        for wx, wy in (verts[j], verts[(j + 1) % m]):
            d = math.hypot(wx - px, wy - py)
            if d > best:
                best = d
    return best


def clip_halfplane(vertices: np.ndarray, a, off: float, eps: float = 1e-12) -> np.ndarray:
    """Clip a convex vertex cycle against a . x <= off (Sutherland-Hodgman)."""
    a = np.asarray(a, float)
    out = []
    k = len(vertices)
    for i in range(k):
        p, q = vertices[i], vertices[(i + 1) % k]
        sp = a @ p - off
        sq = a @ q - off
        if sp <= eps:
            out.append(p)
        if (sp < -eps and sq > eps) or (sp > eps and sq < -eps):
            lam = sp / (sp - sq)
            out.append(p + lam * (q - p))
    return np.array(out) if out else np.empty((0, 2))


def regular_polygon(m: int, radius: float = 1.0, center=(0.0, 0.0), phase: float = 0.0) -> HPolygon:
    """Canonical regular m-gon with the given circumradius."""
    ang = phase + 2 * math.pi * np.arange(m) / m
    verts = np.stack(
        [center[0] + radius * np.cos(ang), center[1] + radius * np.sin(ang)], axis=1
    )
    return canonicalize(verts)
