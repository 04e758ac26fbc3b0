"""Brute-force reference implementations for cross-validation.

Everything here is deliberately simple and independent of the dome and
hierarchy machinery: polygon clipping, direct vertex scans, bisection
root finding, and small LPs over the full constraint list.  Slow but
trustworthy; the acceptance suite pits the fast solver against it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import EmptyInteriorError
from .geometry import HPolygon, canonicalize, clip_halfplane, inradius_incenter
from .lp import OPTIMAL, UNBOUNDED, small_lp
from .tolerance import DEFAULT_TOL, Tol


@dataclass(frozen=True)
class OracleConfig:
    bisection_tol: float = 1e-12
    max_iter: int = 200
    seed: int = 0

    def __post_init__(self):
        if self.bisection_tol <= 0:
            raise ValueError("bisection tolerance must be positive")


def _clip_inner(P: HPolygon, t: float, eps: float) -> np.ndarray:
    verts = P.vertices
    for a, b in zip(P.A, P.b):
        verts = clip_halfplane(verts, a, b - t, eps)
        if len(verts) == 0:
            return verts
    return verts


def oracle_fi(P: HPolygon, i: int, t: float, n: int, cfg: OracleConfig = OracleConfig()) -> float:
    """Width gap along edge normal i at offset t, by explicit clipping."""
    eps = 1e-9 * max(1.0, float(np.abs(P.b).max()))
    verts = _clip_inner(P, t, eps)
    if len(verts) == 0:
        raise EmptyInteriorError(f"inner body empty at t={t}")
    proj = verts @ P.A[i]
    return float(proj.max() - proj.min()) - 2.0 * (n - 1) * t


def _row_alive(P: HPolygon, i: int, t: float, tol: Tol) -> bool:
    """Does row i still touch the inner body at offset t?

    The margin between the relaxed maximum and b_i - t can close with an
    arbitrarily shallow slope, so the comparison slack sits near machine
    precision to keep the bisected M_i sharp."""
    rows3 = [((a[0], a[1], 1.0), b) for a, b in zip(P.A, P.b)]
    feas = small_lp(rows3 + [((0.0, 0.0, -1.0), -t)], (0.0, 0.0, 1.0), tol=tol)
    eps = 1e-13 * max(1.0, abs(float(P.b[i])))
    if feas.status != OPTIMAL or feas.value < t - eps:
        return False  # inner body already empty
    others = [
        (tuple(a), float(b - t)) for j, (a, b) in enumerate(zip(P.A, P.b)) if j != i
    ]
    res = small_lp(others, tuple(P.A[i]), tol=tol)
    if res.status == UNBOUNDED:
        return True
    if res.status != OPTIMAL:
        return False
    return res.value > P.b[i] - t - eps


def oracle_Mi(P: HPolygon, i: int, cfg: OracleConfig = OracleConfig(), tol: Tol = DEFAULT_TOL) -> float:
    """Largest offset at which row i is still non-redundant, by bisection."""
    r, _ = inradius_incenter(P, tol)
    lo, hi = 0.0, r * (1.0 + 1e-9) + cfg.bisection_tol
    if _row_alive(P, i, hi, tol):
        return min(hi, r)
    for _ in range(cfg.max_iter):
        if hi - lo <= cfg.bisection_tol:
            break
        mid = 0.5 * (lo + hi)
        if _row_alive(P, i, mid, tol):
            lo = mid
        else:
            hi = mid
    return min(0.5 * (lo + hi), r)


def _fi_lp(P: HPolygon, i: int, t: float, n: int, tol: Tol) -> float:
    """f_i(t) via one LP: on [0, M_i] the max side equals b_i - t."""
    rows = [(tuple(a), float(b - t)) for a, b in zip(P.A, P.b)]
    res = small_lp(rows, tuple(P.A[i]), maximize=False, tol=tol)
    if res.status != OPTIMAL:
        raise EmptyInteriorError(f"inner body empty at t={t}")
    return (P.b[i] - t) - res.value - 2.0 * (n - 1) * t


def _Mi_lp(P: HPolygon, i: int, tol: Tol) -> float:
    """M_i via one lifted LP: maximize t while row i stays tight."""
    rows = [((a[0], a[1], 1.0), float(b)) for a, b in zip(P.A, P.b)]
    rows.append(((0.0, 0.0, -1.0), 0.0))
    eq = ((float(P.A[i, 0]), float(P.A[i, 1]), 1.0), float(P.b[i]))
    res = small_lp(rows, (0.0, 0.0, 1.0), tol=tol, equalities=[eq])
    if res.status != OPTIMAL:
        raise EmptyInteriorError(f"facet {i} never touches the inner body")
    return float(res.value)


def oracle_solve(P: HPolygon, n: int, cfg: OracleConfig = OracleConfig(), tol: Tol = DEFAULT_TOL):
    """Reference (rho, direction): bisect every qualifying width gap.

    Quadratic-ish: one LP per bisection step per edge.  M_i comes from a
    single lifted LP so the whole run stays within O(m^2 log(1/tol)).
    """
    m = P.m
    scale = max(1.0, float(np.abs(P.b).max()))
    best_rho = math.inf
    best_i = -1
    for i in range(m):
        Mi = _Mi_lp(P, i, tol)
        fM = _fi_lp(P, i, Mi, n, tol)
        if fM > tol.slack(scale) * 10.0:
            continue
        lo, hi = 0.0, Mi
        f_lo = _fi_lp(P, i, 0.0, n, tol)
        if f_lo <= 0.0:
            continue  # cannot happen for valid polygons; guards degenerate input
        if math.isfinite(best_rho):
            # f_i decreasing: a positive gap at the incumbent best root
            # means this edge's root lies beyond it -- skip the bisection
            probe = min(best_rho + cfg.bisection_tol, Mi)
            if _fi_lp(P, i, probe, n, tol) > 0.0:
                continue
            hi = probe
        for _ in range(cfg.max_iter):
            if hi - lo <= cfg.bisection_tol:
                break
            mid = 0.5 * (lo + hi)
            if _fi_lp(P, i, mid, n, tol) > 0.0:
                lo = mid
            else:
                hi = mid
        root = 0.5 * (lo + hi)
        if root < best_rho - tol.slack(scale):
            best_rho = root
            best_i = i
    if best_i < 0:
        raise EmptyInteriorError("no qualifying edge; invalid input?")
    return float(best_rho), (float(P.A[best_i, 0]), float(P.A[best_i, 1]))


def random_polygon(m: int, seed: int = 0, model: str = "circle") -> HPolygon:
    """Deterministic random convex m-gon; retries until >= 0.9 m corners."""
    if m < 3:
        raise ValueError("need at least 3 vertices")
    if model not in ("circle", "ellipse", "smoothed"):
        raise ValueError(f"unknown model {model!r}")
    rng = np.random.default_rng(seed)
    for _ in range(64):
        ang = np.sort(rng.uniform(0.0, 2.0 * math.pi, size=m))
        if model == "circle":
            rad = np.ones(m)
            ax = (1.0, 1.0)
        elif model == "ellipse":
            rad = np.ones(m)
            ax = (1.0 + rng.uniform(0.2, 2.0), 1.0)
        else:
            # amplitude below 1/9 keeps r + r'' positive: curve stays convex
            rad = 1.0 + 0.08 * np.sin(3 * ang + rng.uniform(0, 2 * math.pi))
            ax = (1.0, 1.0)
        pts = np.stack([ax[0] * rad * np.cos(ang), ax[1] * rad * np.sin(ang)], axis=1)
        try:
            P = canonicalize(pts)
        except EmptyInteriorError:
            continue
        if P.m >= 0.9 * m:
            return P
    raise EmptyInteriorError(f"could not draw a convex {m}-gon from model {model}")
