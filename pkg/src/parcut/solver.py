"""Optimal equal-spaced parallel cuts of a convex polygon.

Pipeline: canonicalize the polygon, lift it to its dome, perturb for
genericity, build the facet-peeling hierarchy, then per polygon edge i:

* M_i   -- the offset at which edge i stops supporting the inner body
           (the top of lifted facet i),
* root  -- the unique zero of the rewritten width gap
           f_i(t) = b_i - min_{inner_t} A_i.x - (2n-1) t, obtained as one
           LP: maximize t over the dome cut by A_i.x + (2n-1) t <= b_i.

Edges whose root lands past M_i cannot carry the minimum width there and
are filtered out; the smallest surviving root is the critical radius rho,
its edge normal is the cut direction, and the n-1 cuts are equally spaced
along it.  Every number reported is re-solved from the winning constraint
basis against the unperturbed input, so the perturbation never leaks into
results.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .dome import bounded_core, build_dome, face_lattice, perturb
from .errors import (
    GeometryError,
    InvalidPieceCountError,
    NotQualifiedError,
    OutOfRangeError,
    VerificationFailedError,
)
from .geometry import (
    HPolygon,
    canonicalize,
    clip_halfplane,
    diameter,
    inner_body,
    inradius_incenter,
    min_width,
)
from .hierarchy import Hierarchy, build_hierarchy
from .lp import OPTIMAL, small_lp
from .queries import (
    QueryStats,
    batch_section_descend,
    facet_max_t,
    lp_max,
    lp_max_section,
)
from .tolerance import DEFAULT_TOL, Tol
from .dome import _solve3


@dataclass
class FacetDiagnostics:
    """Per-edge byproducts of the solve, mostly for inspection and tests."""

    index: int
    M: float
    f_at_M: float | None
    qualifies: bool
    root: float | None


@dataclass(frozen=True)
class Cut:
    """Cut line {x : normal . x = offset}."""

    normal: tuple[float, float]
    offset: float


@dataclass
class VerificationReport:
    width_residual: float
    min_fi_residual: float
    piece_inradii: list[float]
    max_piece_inradius: float
    tolerance: float
    ok: bool


@dataclass
class Solution:
    rho: float
    direction: tuple[float, float]
    winner: int
    cuts: list[Cut]
    n: int
    diagnostics: list[FacetDiagnostics] | None
    verification: VerificationReport | None
    stats: dict


def _resolve_rows(orig_rows, labels, extra=None):
    """Exact concurrence of up to three original rows (plus one extra)."""
    rows = [orig_rows[lab] for lab in labels]
    if extra is not None:
        rows.append(extra)
    if len(rows) != 3:
        return None
    (n1, o1), (n2, o2), (n3, o3) = rows
    return _solve3(n1, o1, n2, o2, n3, o3)


def _prepared(P: HPolygon, n: int, seed: int, tol: Tol):
    """Build the perturbed hierarchy for a canonical polygon."""
    D0 = build_dome(P)
    last = None
    for attempt in range(3):
        try:
            Dp = perturb(D0, seed=seed + attempt)
            lat = face_lattice(Dp, tol=tol, strict=False)
            core = bounded_core(Dp, tol=tol)
            return build_hierarchy(Dp, core, original=D0, lattice=lat, tol=tol)
        except GeometryError as exc:  # retry under a fresh perturbation seed
            last = exc
    raise last


def _facet_top(H: Hierarchy, i: int, stats: QueryStats) -> float:
    """M_i re-solved on the unperturbed rows via the winning facet triple."""
    val, tri = facet_max_t(H, i, stats)
    pt = _resolve_rows(H.orig_rows, tri)
    return pt[2] if pt is not None else val


def eval_fi(
    H: Hierarchy,
    P: HPolygon,
    i: int,
    t: float,
    n: int,
    tol: Tol = DEFAULT_TOL,
    stats: QueryStats | None = None,
) -> float:
    """Width gap f_i(t) = b_i - min_{inner_t} A_i.x - (2n-1) t for t <= M_i."""
    if stats is None:
        stats = QueryStats()
    Mi = _facet_top(H, i, stats)
    scale = max(H.scale, 1.0)
    if t > Mi + tol.slack(scale):
        raise OutOfRangeError(f"t={t} beyond facet {i} lifetime M={Mi}")
    if t < 0:
        raise OutOfRangeError("t must be nonnegative")

    apex = lp_max(H, (0.0, 0.0, 1.0), stats)
    a = P.A[i]
    c = (-float(a[0]), -float(a[1]), 0.0)
    bi = float(P.b[i])

    tq = min(t, apex.value - 1e-7 * scale)
    tq = max(tq, 0.0)
    res = lp_max_section(H, ((0.0, 0.0, 1.0), tq), c, stats)
    if res.status != OPTIMAL:
        res = lp_max_section(H, ((0.0, 0.0, 1.0), max(0.0, tq - 1e-6 * scale)), c, stats)
    if res.status != OPTIMAL:
        raise OutOfRangeError(f"slice at t={t} is empty")

    if len(res.basis) == 2:
        pt = _resolve_rows(H.orig_rows, res.basis, extra=((0.0, 0.0, 1.0), t))
    else:
        pt = _resolve_rows(H.orig_rows, res.basis)
    if pt is None:
        return bi + res.value - (2 * n - 1) * t
    return bi - (a[0] * pt[0] + a[1] * pt[1]) - (2 * n - 1) * t


def _root_from_section(H: Hierarchy, i: int, n: int, sec) -> tuple[float, tuple]:
    """Re-solve a root-LP section result on the unperturbed coefficients."""
    u, v, pair, x = sec
    bi = float(H.original.offsets[i])
    a = H.original.normals[i]
    g_row = ((float(a[0]), float(a[1]), float(2 * n - 1)), bi)
    if pair is not None:
        pt = _resolve_rows(H.orig_rows, pair, extra=g_row)
        basis = (pair[0], pair[1], "gap")
    else:
        pt = _resolve_rows(H.orig_rows, H.store.tris[u])
        basis = H.store.tris[u]
    if pt is None:
        return x[2], basis
    return pt[2], basis


def root_lp(
    H: Hierarchy,
    P: HPolygon,
    i: int,
    n: int,
    tol: Tol = DEFAULT_TOL,
    stats: QueryStats | None = None,
) -> float:
    """Root of f_i on (0, M_i]; requires the qualification f_i(M_i) <= 0."""
    if stats is None:
        stats = QueryStats()
    Mi = _facet_top(H, i, stats)
    fM = eval_fi(H, P, i, Mi, n, tol, stats)
    scale = max(H.scale, 1.0)
    if fM > tol.slack(scale) * 10.0:
        raise NotQualifiedError(f"facet {i}: f_i(M_i) = {fM:g} > 0")
    root, _basis = _root_single(H, i, n, stats)
    return root


def _root_single(H: Hierarchy, i: int, n: int, stats: QueryStats):
    """One root LP through the scalar query path."""
    from .queries import lp_max_constrained

    nrm, off = H.rows[i]
    g = (nrm[0], nrm[1], float(2 * n - 1))
    res = lp_max_constrained(H, (0.0, 0.0, 1.0), (g, off), stats)
    if res.status != OPTIMAL:
        raise NotQualifiedError(f"facet {i}: root LP infeasible")
    if len(res.basis) == 3:
        pt = _resolve_rows(H.orig_rows, res.basis)
        return (pt[2] if pt is not None else res.value), res.basis
    bi = float(H.original.offsets[i])
    a = H.original.normals[i]
    g_row = ((float(a[0]), float(a[1]), float(2 * n - 1)), bi)
    pt = _resolve_rows(H.orig_rows, res.basis, extra=g_row)
    return (pt[2] if pt is not None else res.value), res.basis


def solve(
    P,
    n: int,
    *,
    seed: int = 0,
    tol: Tol = DEFAULT_TOL,
    diagnostics: bool | None = None,
) -> Solution:
    """Compute rho with width(P^rho) = 2 n rho, the direction, and the cuts.

    `diagnostics` controls whether per-facet f_i(M_i) values are evaluated
    (defaults to True up to 4096 edges; the qualification itself never
    needs them).
    """
    t_start = time.perf_counter()
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool) or n < 1:
        raise InvalidPieceCountError(f"piece count must be a positive integer, got {n!r}")
    n = int(n)
    if not isinstance(P, HPolygon):
        P = canonicalize(P, tol)  # HPolygon input is canonical by contract
    m = P.m
    if diagnostics is None:
        diagnostics = m <= 4096

    H = _prepared(P, n, seed, tol)
    t_built = time.perf_counter()
    stats = QueryStats()
    scale = max(H.scale, 1.0)
    eps_q = 10.0 * tol.slack(scale)

    apex = lp_max(H, (0.0, 0.0, 1.0), stats)

    Ms = np.empty(m)
    for i in range(m):
        Ms[i] = _facet_top(H, i, stats)

    # Root LPs: the shared unconstrained optimum is the apex; facets whose
    # gap row already holds there keep it, the rest descend on their row's
    # boundary plane.
    A = H.dome.normals[:m, :2]
    g_t = float(2 * n - 1)
    apex_pt = apex.point
    lhs_apex = A @ np.asarray(apex_pt[:2]) + g_t * apex_pt[2]
    offs_pert = H.dome.offsets[:m]
    viol = lhs_apex > offs_pert + tol.slack(scale)

    roots = np.full(m, np.inf)
    sat = np.nonzero(~viol)[0]
    if len(sat):
        pt = _resolve_rows(H.orig_rows, apex.basis)
        roots[sat] = pt[2] if pt is not None else apex.value

    idx = np.nonzero(viol)[0]
    if len(idx):
        planes = np.empty((len(idx), 4))
        planes[:, 0] = A[idx, 0]
        planes[:, 1] = A[idx, 1]
        planes[:, 2] = g_t
        planes[:, 3] = offs_pert[idx]
        objs = np.tile([0.0, 0.0, 1.0], (len(idx), 1))
        secs = batch_section_descend(H, planes, objs, stats)
        for k, i in enumerate(idx):
            if secs[k] is None:
                continue  # gap row cuts below the floor: no root, no claim
            roots[i], _basis = _root_from_section(H, int(i), n, secs[k])

    # inradius and incenter of the unperturbed polygon, via the apex basis
    apex_orig = _resolve_rows(H.orig_rows, apex.basis)
    if apex_orig is None:
        r_orig, incenter = inradius_incenter(P, tol)
    else:
        r_orig = apex_orig[2]
        incenter = (apex_orig[0], apex_orig[1])
    qualifies = roots <= Ms + eps_q
    qualifies &= roots <= r_orig + eps_q

    if not qualifies.any():
        raise VerificationFailedError("no-root", "no facet qualifies; invalid input?")
    winner = int(np.nonzero(qualifies)[0][np.argmin(roots[qualifies])])
    rho = float(roots[winner])
    direction = (float(P.A[winner, 0]), float(P.A[winner, 1]))

    fvals: list[float | None] = [None] * m
    if diagnostics:
        for i in range(m):
            try:
                fvals[i] = eval_fi(H, P, i, float(Ms[i]), n, tol, stats)
            except OutOfRangeError:
                fvals[i] = None
    diag = [
        FacetDiagnostics(
            index=i,
            M=float(Ms[i]),
            f_at_M=fvals[i],
            qualifies=bool(qualifies[i]),
            root=float(roots[i]) if np.isfinite(roots[i]) else None,
        )
        for i in range(m)
    ]

    inner = _inner_from_lifetimes(P, rho, Ms, tol)
    if inner is None:
        inner = inner_body(P, rho, tol, interior=incenter)
    cuts = place_cuts(P, rho, direction, n, _inner=inner)
    report = verify_solution(
        P, n, rho, direction, cuts, tol, _inner=inner, _diam=H.scale, _hier=H
    )
    t_end = time.perf_counter()

    return Solution(
        rho=rho,
        direction=direction,
        winner=winner,
        cuts=cuts,
        n=n,
        diagnostics=diag,
        verification=report,
        stats={
            "m": m,
            "depth": H.depth,
            "build_ms": (t_built - t_start) * 1e3,
            "solve_ms": (t_end - t_start) * 1e3,
            "lp_queries": stats.facet_sub_lps + stats.levels_visited,
            "vertex_inspections": stats.vertex_inspections,
            "binary_search_steps": stats.binary_search_steps,
            "wall_ms": (t_end - t_start) * 1e3,
        },
    )


def _lifted_max_t(H: Hierarchy, extra_row) -> float:
    """Inradius of P cut by one half-plane, via the hierarchy.

    The lifted dome of the cut polygon is the dome plus one lifted row, so
    its height is a one-extra-half-space query; the answer is re-solved on
    unperturbed coefficients.
    """
    from .queries import lp_max_constrained

    res = lp_max_constrained(H, (0.0, 0.0, 1.0), extra_row)
    if res.status != OPTIMAL:
        raise VerificationFailedError("pieces", "piece inradius query infeasible")
    if len(res.basis) == 3:
        pt = _resolve_rows(H.orig_rows, res.basis)
    else:
        pt = _resolve_rows(H.orig_rows, res.basis, extra=extra_row)
    return float(pt[2]) if pt is not None else float(res.value)


def _inner_from_lifetimes(P: HPolygon, rho: float, Ms, tol: Tol) -> HPolygon | None:
    """Inner body at rho assembled from the facet lifetimes.

    The rows supporting the inner body are exactly those with M_i > rho,
    in unchanged cyclic order, so their consecutive intersections are its
    vertices; no redundancy pass is needed.
    """
    scale = max(1.0, float(np.abs(P.b).max()))
    alive = np.nonzero(Ms > rho + tol.slack(scale))[0]
    k = len(alive)
    if k < 3:
        return None
    A = P.A[alive]
    b = P.b[alive] - rho
    A2 = np.roll(A, -1, axis=0)
    b2 = np.roll(b, -1)
    det = A[:, 0] * A2[:, 1] - A[:, 1] * A2[:, 0]
    if np.any(np.abs(det) < 1e-13):
        return None  # adjacent near-parallel rows: fall back to the hull path
    verts = np.stack(
        [(b * A2[:, 1] - b2 * A[:, 1]) / det, (A[:, 0] * b2 - A2[:, 0] * b) / det],
        axis=1,
    )
    return HPolygon(A, b, verts)


def place_cuts(P: HPolygon, rho: float, v, n: int, _inner: HPolygon | None = None) -> list[Cut]:
    """n-1 equally spaced cut lines normal to v, spanning width(P^rho)."""
    if n <= 1:
        return []
    inner = _inner if _inner is not None else inner_body(P, rho)
    if inner is None:
        raise VerificationFailedError("cuts", f"inner body empty at rho={rho}")
    vv = np.asarray(v, float)
    s_min = float((inner.vertices @ vv).min()) - rho
    return [
        Cut((float(vv[0]), float(vv[1])), s_min + 2.0 * rho * j)
        for j in range(1, n)
    ]


def verify_solution(
    P: HPolygon,
    n: int,
    rho: float,
    direction,
    cuts: list[Cut],
    tol: Tol = DEFAULT_TOL,
    _inner: HPolygon | None = None,
    _diam: float | None = None,
    _hier: Hierarchy | None = None,
) -> VerificationReport:
    """Check the three defining identities of a solution.

    (a) width(inner_rho) + 2 rho = 2 n rho, (b) cutting P yields n pieces
    with max inradius rho (none exceeding it), (c) the smallest width gap
    over edges vanishes at rho.  Raises VerificationFailedError otherwise.
    """
    diam = _diam if _diam is not None else diameter(P)
    vtol = 1e-8 * max(diam, 1.0)

    inner = _inner if _inner is not None else inner_body(P, rho)
    if inner is None:
        r, _ = inradius_incenter(P, tol)
        if rho > r + vtol:
            raise VerificationFailedError("width", f"rho={rho} exceeds inradius {r}")
        width_inner = 0.0
    else:
        width_inner = min_width(inner).width
    width_residual = width_inner + 2 * rho - 2 * n * rho
    if abs(width_residual) > vtol:
        raise VerificationFailedError(
            "width", f"width(inner)+2rho-2nrho = {width_residual:g}"
        )

    min_fi_residual = width_inner - 2 * (n - 1) * rho
    if abs(min_fi_residual) > vtol:
        raise VerificationFailedError("min-fi", f"min_i f_i(rho) = {min_fi_residual:g}")

    vv = np.asarray(direction, float)
    pieces = []
    verts = P.vertices
    for cut in cuts:
        pieces.append(clip_halfplane(verts, vv, cut.offset))
        verts = clip_halfplane(verts, -vv, -cut.offset)
    pieces.append(verts)

    # piece inradii straight from row lists: the polygon rows plus the slab
    # rows, letting the LP ignore whatever is redundant; when a hierarchy
    # is on hand, single-slab pieces go through it instead
    base_rows = None
    vrow = (float(vv[0]), float(vv[1]))
    inradii = []
    for j, piece in enumerate(pieces):
        if len(piece) < 3:
            raise VerificationFailedError("pieces", "degenerate piece produced")
        extras = []
        if j > 0:
            extras.append(((-vrow[0], -vrow[1], 1.0), -float(cuts[j - 1].offset)))
        if j < len(pieces) - 1:
            extras.append(((vrow[0], vrow[1], 1.0), float(cuts[j].offset)))
        if _hier is not None and len(extras) == 1:
            inradii.append(_lifted_max_t(_hier, extras[0]))
            continue
        if base_rows is None:
            base_rows = [
                ((float(a[0]), float(a[1]), 1.0), float(b)) for a, b in zip(P.A, P.b)
            ]
            base_rows.append(((0.0, 0.0, -1.0), 0.0))
        res = small_lp(base_rows + extras, (0.0, 0.0, 1.0), tol=tol)
        if res.status != OPTIMAL:
            raise VerificationFailedError("pieces", f"piece {j} inradius LP failed")
        inradii.append(float(res.value))
    if len(inradii) != n:
        raise VerificationFailedError("pieces", f"{len(inradii)} pieces, wanted {n}")
    max_r = max(inradii)
    if max_r > rho + vtol:
        raise VerificationFailedError(
            "pieces", f"piece inradius {max_r:g} exceeds rho {rho:g}"
        )
    if max_r < rho - vtol:
        raise VerificationFailedError(
            "pieces", f"max piece inradius {max_r:g} falls short of rho {rho:g}"
        )
    return VerificationReport(
        width_residual=float(width_residual),
        min_fi_residual=float(min_fi_residual),
        piece_inradii=[float(r) for r in inradii],
        max_piece_inradius=float(max_r),
        tolerance=vtol,
        ok=True,
    )
