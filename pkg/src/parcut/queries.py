"""LP maximization on the hierarchy in polylogarithmic time.

Three query flavors, all driven by the same descent:

* `lp_max`: maximize a linear objective over the full dome.  Solve on the
  tiny core by enumeration, then walk levels downward; when the incumbent
  vertex gets cut off, its kill record names the one reinstated facet that
  did it, and the optimum moves onto that facet (a planar sub-LP).
* `lp_max_section`: maximize over the dome cut by a plane.  A section
  vertex lives on an edge of the current level; it is tracked as its
  facet pair plus the two endpoint vertices, which are refreshed from the
  kill records at every level.  When the point itself is cut off, the
  killer facet intersects the plane in a segment whose ends are found by
  binary search on the facet's vertex cycle.
* `lp_max_constrained`: one extra half-space, solved as "try without it,
  else optimize on its boundary plane" per the section machinery.

Results carry the facet labels that pin the optimum, so callers can
re-solve the same basis against unperturbed coefficients.
"""

from __future__ import annotations

from dataclasses import dataclass

from .hierarchy import Hierarchy
from .lp import INFEASIBLE, OPTIMAL, LpResult
from .tolerance import DEFAULT_TOL, Tol


@dataclass
class QueryStats:
    """Instrumentation counters for the complexity acceptance envelopes.

    Setting `trace` to a list additionally records the incumbent objective
    value at every level of a full-dimensional descent."""

    levels_visited: int = 0
    facet_sub_lps: int = 0
    vertex_inspections: int = 0
    binary_search_steps: int = 0
    trace: list[float] | None = None

    def merge(self, other: "QueryStats") -> None:
        self.levels_visited += other.levels_visited
        self.facet_sub_lps += other.facet_sub_lps
        self.vertex_inspections += other.vertex_inspections
        self.binary_search_steps += other.binary_search_steps


@dataclass(frozen=True)
class Query:
    """Bundled query description: objective, optional cutting plane,
    optional extra half-space (at most one)."""

    objective: tuple[float, float, float]
    section: tuple[tuple[float, float, float], float] | None = None
    extra: tuple[tuple[float, float, float], float] | None = None


def run_query(H: Hierarchy, q: Query, stats: QueryStats | None = None) -> LpResult:
    if q.section is not None and q.extra is not None:
        raise ValueError("a query takes a section plane or an extra row, not both")
    if q.section is not None:
        return lp_max_section(H, q.section, q.objective, stats)
    if q.extra is not None:
        return lp_max_constrained(H, q.objective, q.extra, stats)
    return lp_max(H, q.objective, stats)


# ---------------------------------------------------------------------------
# full-dimensional descent


def lp_max(H: Hierarchy, c, stats: QueryStats | None = None) -> LpResult:
    """Exact maximizer vertex of the dome for objective c."""
    if stats is None:
        stats = QueryStats()
    vid = _vertex_descend(H, tuple(map(float, c)), 0, stats)
    p = H.store.pts[vid]
    val = c[0] * p[0] + c[1] * p[1] + c[2] * p[2]
    return LpResult(OPTIMAL, p, val, H.store.tris[vid])


def _vertex_descend(H: Hierarchy, c, stop_level: int, stats: QueryStats) -> int:
    pts = H.store.pts
    birth = H.store.birth_level
    best = -1
    bestval = -1e400
    bestpt = None
    for vid in H.core_vertices:
        p = pts[vid]
        v = c[0] * p[0] + c[1] * p[1] + c[2] * p[2]
        stats.vertex_inspections += 1
        if v > bestval or (v == bestval and (bestpt is None or p < bestpt)):
            best, bestval, bestpt = vid, v, p
    vid = best
    killer = H.store.birth_killer
    trace = stats.trace
    if trace is not None:
        trace.append(bestval)
    for l in range(H.depth - 1, stop_level - 1, -1):
        stats.levels_visited += 1
        if birth[vid] == l + 1:
            stats.facet_sub_lps += 1
            vid = _facet_descend(H, l, killer[vid], c, stats)
        if trace is not None:
            p = pts[vid]
            trace.append(c[0] * p[0] + c[1] * p[1] + c[2] * p[2])
    return vid


def lp_max_facet(H: Hierarchy, level: int, facet: int, c, stats: QueryStats | None = None) -> LpResult:
    """Maximize c over one facet of the polytope at `level`."""
    if stats is None:
        stats = QueryStats()
    vid = _facet_descend(H, level, facet, tuple(map(float, c)), stats)
    p = H.store.pts[vid]
    val = c[0] * p[0] + c[1] * p[1] + c[2] * p[2]
    return LpResult(OPTIMAL, p, val, H.store.tris[vid])


def facet_max_t(H: Hierarchy, i: int, stats: QueryStats | None = None):
    """Highest point of lifted facet i: the offset at which the polygon edge
    i disappears from the inner body.  Returns (value, facet triple)."""
    if stats is None:
        stats = QueryStats()
    cached = H.facet_top_cache.get(i)
    if cached is None:
        vid = _facet_descend(H, 0, i, (0.0, 0.0, 1.0), stats)
        cached = (H.store.pts[vid][2], H.store.tris[vid])
        H.facet_top_cache[i] = cached
    return cached


def _facet_descend(H: Hierarchy, level: int, facet: int, c, stats: QueryStats) -> int:
    """Maximizer vertex of c over one facet of the polytope at `level`.

    The hierarchy stores every facet's cyclic vertex array per level, and
    the cycle of a facet is a convex polygon, so the planar sub-LP of the
    descent is a single extreme-vertex binary search on that array.
    """
    cyc = H.levels[level].cycles[facet]
    pts = H.store.pts
    D = len(cyc)
    if D <= 8:
        stats.vertex_inspections += D
        best = cyc[0]
        bp = pts[best]
        bestval = c[0] * bp[0] + c[1] * bp[1] + c[2] * bp[2]
        for w in cyc[1:]:
            p = pts[w]
            val = c[0] * p[0] + c[1] * p[1] + c[2] * p[2]
            if val > bestval or (val == bestval and p < bp):
                best, bp, bestval = w, p, val
        return best

    def s(i):
        p = pts[cyc[i]]
        stats.vertex_inspections += 1
        return c[0] * p[0] + c[1] * p[1] + c[2] * p[2]

    return cyc[_extreme_index(s, D, stats)]


# ---------------------------------------------------------------------------
# section descent


def lp_max_section(H: Hierarchy, plane, c, stats: QueryStats | None = None) -> LpResult:
    """Maximize c over the dome intersected with a plane {n . p = d}."""
    if stats is None:
        stats = QueryStats()
    (n, d) = plane
    sec = _section_descend(H, tuple(map(float, n)), float(d), tuple(map(float, c)), 0, stats)
    if sec is None:
        return LpResult(INFEASIBLE)
    u, v, pair, x = sec
    val = c[0] * x[0] + c[1] * x[1] + c[2] * x[2]
    if u == v:
        return LpResult(OPTIMAL, x, val, H.store.tris[u])
    return LpResult(OPTIMAL, x, val, pair)


def lp_max_constrained(H: Hierarchy, c, extra, stats: QueryStats | None = None, tol: Tol = DEFAULT_TOL) -> LpResult:
    """Maximize c over the dome with one extra half-space g . p <= h."""
    if stats is None:
        stats = QueryStats()
    g, hoff = extra
    res = lp_max(H, c, stats)
    p = res.point
    val = g[0] * p[0] + g[1] * p[1] + g[2] * p[2]
    slack = tol.slack(abs(hoff) + H.scale * (abs(g[0]) + abs(g[1]) + abs(g[2])))
    if val <= hoff + slack:
        return res
    return lp_max_section(H, (g, hoff), c, stats)


def _sorted_triple(a, b, c):
    if a > b:
        a, b = b, a
    if b > c:
        b, c = c, b
        if a > b:
            a, b = b, a
    return (a, b, c)


def _section_descend(H: Hierarchy, n, d, c, stop_level: int, stats: QueryStats):
    """Core-to-`stop_level` descent of the best plane point.

    Returns (u, v, pair, x): the optimum x on the edge between vertices u
    and v carried by the facet pair; u == v marks a vertex lying exactly
    on the plane.  None when the plane misses the polytope.
    """
    pts = H.store.pts
    tris = H.store.tris
    birth = H.store.birth_level
    killer = H.store.birth_killer
    by_triple = H.store.by_triple
    nx, ny, nz = n
    ztol = 1e-10 * (abs(nx) + abs(ny) + abs(nz)) * max(H.scale, 1.0)

    # seed on the core by scanning its few edges
    best = None
    bestval = -1e400
    for (u, v) in H.core_edges:
        pu = pts[u]
        pv = pts[v]
        su = nx * pu[0] + ny * pu[1] + nz * pu[2] - d
        sv = nx * pv[0] + ny * pv[1] + nz * pv[2] - d
        stats.vertex_inspections += 2
        cand = []
        if abs(su) <= ztol:
            cand.append((u, u, pu))
        if abs(sv) <= ztol:
            cand.append((v, v, pv))
        if (su > ztol and sv < -ztol) or (su < -ztol and sv > ztol):
            lam = su / (su - sv)
            x = (
                pu[0] + lam * (pv[0] - pu[0]),
                pu[1] + lam * (pv[1] - pu[1]),
                pu[2] + lam * (pv[2] - pu[2]),
            )
            cand.append((u, v, x))
        for (a, b, x) in cand:
            val = c[0] * x[0] + c[1] * x[1] + c[2] * x[2]
            if val > bestval or (val == bestval and best is not None and x < best[3]):
                pair = None
                if a != b:
                    ta = tris[a]
                    tb = tris[b]
                    shared = [lab for lab in ta if lab in tb]
                    pair = (shared[0], shared[1])
                best = (a, b, pair, x)
                bestval = val
    if best is None:
        return None

    u, v, pair, x = best
    for l in range(H.depth - 1, stop_level - 1, -1):
        stats.levels_visited += 1
        hits = []
        if birth[u] == l + 1:
            hits.append(killer[u])
        if v != u and birth[v] == l + 1:
            g2 = killer[v]
            if g2 not in hits:
                hits.append(g2)
        cut = -1
        cut_excess = 0.0
        for g in hits:
            gn, goff = H.rows[g]
            stats.vertex_inspections += 1
            excess = gn[0] * x[0] + gn[1] * x[1] + gn[2] * x[2] - goff
            if excess > ztol:
                cut = g
                cut_excess = excess
                break
        if cut >= 0:
            sec = _segment_on_facet(H, l, cut, n, d, c, ztol, stats)
            if sec is not None:
                u, v, pair, x = sec
                continue
            if cut_excess > 1000.0 * ztol:
                return None  # decisively cut off and the facet misses the plane
            # marginal violation yet the killer facet does not reach the
            # plane: noise-floor call, treat the point as surviving
        # point survives; refresh endpoint vertices onto the current level
        if u != v:
            if birth[u] == l + 1:
                u = by_triple.get(_sorted_triple(pair[0], pair[1], killer[u]), u)
            if birth[v] == l + 1:
                v = by_triple.get(_sorted_triple(pair[0], pair[1], killer[v]), v)
    return (u, v, pair, x)


def _segment_on_facet(H: Hierarchy, level: int, facet: int, n, d, c, ztol, stats: QueryStats):
    """Optimum of c on {plane} intersected with one facet polygon.

    The plane cuts the convex vertex cycle in at most one segment; its two
    ends sit on cycle edges located by binary search from the extreme
    vertices.  Returns the better end as (u, v, pair, x) or None when the
    plane misses the facet (the whole section is then empty).
    """
    cyc = H.levels[level].cycles[facet]
    pts = H.store.pts
    tris = H.store.tris
    D = len(cyc)
    nx, ny, nz = n

    if D <= 24:
        # scan path: cycles this small dominate the call mix, so skip the
        # binary-search machinery and enumerate candidate section points
        stats.vertex_inspections += D
        svals = []
        push = svals.append
        smax = -1e400
        smin = 1e400
        for w in cyc:
            p = pts[w]
            sw = nx * p[0] + ny * p[1] + nz * p[2] - d
            push(sw)
            if sw > smax:
                smax = sw
            if sw < smin:
                smin = sw
        if smax < -ztol or smin > ztol:
            return None
        best = None
        bestval = -1e400
        cx, cy, cz = c
        for i in range(D):
            sa = svals[i]
            wa = cyc[i]
            if -ztol <= sa <= ztol:
                p = pts[wa]
                val = cx * p[0] + cy * p[1] + cz * p[2]
                if val > bestval or (val == bestval and best is not None and p < best[3]):
                    best = (wa, wa, None, p)
                    bestval = val
                continue
            j = i + 1 if i + 1 < D else 0
            sb = svals[j]
            if (sa > ztol and sb < -ztol) or (sa < -ztol and sb > ztol):
                wb = cyc[j]
                pa = pts[wa]
                pb = pts[wb]
                lam = sa / (sa - sb)
                xx = (
                    pa[0] + lam * (pb[0] - pa[0]),
                    pa[1] + lam * (pb[1] - pa[1]),
                    pa[2] + lam * (pb[2] - pa[2]),
                )
                val = cx * xx[0] + cy * xx[1] + cz * xx[2]
                if val > bestval or (val == bestval and best is not None and xx < best[3]):
                    ta = tris[wa]
                    tb = tris[wb]
                    shared = [lab for lab in ta if lab in tb]
                    best = (wa, wb, (shared[0], shared[1]), xx)
                    bestval = val
        return best

    def s(i):
        p = pts[cyc[i]]
        stats.vertex_inspections += 1
        return nx * p[0] + ny * p[1] + nz * p[2] - d

    imax = _extreme_index(s, D, stats)
    smax = s(imax)
    if smax < -ztol:
        return None
    imin = _extreme_index(lambda i: -s(i), D, stats)
    smin = s(imin)
    if smin > ztol:
        return None

    ends = []
    if abs(smax) <= ztol or abs(smin) <= ztol:
        # Tangency: the plane grazes the facet in a vertex or a whole edge
        # (adjacent facet planes do the latter).  Collect the contiguous
        # on-plane band around the touching extreme.
        start = imax if abs(smax) <= ztol else imin
        band = [start]
        for step in (1, -1):
            i = start
            for _ in range(D - 1):
                i = (i + step) % D
                if i == start or abs(s(i)) > ztol:
                    break
                band.append(i)
        seen = set()
        for i in band:
            w = cyc[i]
            if w not in seen:
                seen.add(w)
                ends.append((w, w, None, pts[w]))
    if smax > ztol and smin < -ztol:
        for fwd in (1, -1):
            a, b = _sign_change(s, imax, imin, D, fwd, ztol, stats)
            wa, wb = cyc[a], cyc[b]
            pa, pb = pts[wa], pts[wb]
            sa = nx * pa[0] + ny * pa[1] + nz * pa[2] - d
            sb = nx * pb[0] + ny * pb[1] + nz * pb[2] - d
            if abs(sa) <= ztol:
                ends.append((wa, wa, None, pa))
                continue
            lam = sa / (sa - sb)
            x = (
                pa[0] + lam * (pb[0] - pa[0]),
                pa[1] + lam * (pb[1] - pa[1]),
                pa[2] + lam * (pb[2] - pa[2]),
            )
            ta = tris[wa]
            tb = tris[wb]
            shared = [lab for lab in ta if lab in tb]
            ends.append((wa, wb, (shared[0], shared[1]), x))

    best = None
    bestval = -1e400
    for (a, b, pair, x) in ends:
        val = c[0] * x[0] + c[1] * x[1] + c[2] * x[2]
        if val > bestval or (val == bestval and best is not None and x < best[3]):
            best = (a, b, pair, x)
            bestval = val
    return best


def _sign_change(s, imax, imin, D, direction, ztol, stats: QueryStats):
    """Edge index pair (a, a+dir) where s crosses from >= 0 to < -ztol on
    the arc from imax to imin; s is monotone along each arc."""
    span = (imin - imax) * direction % D
    lo, hi = 0, span  # s(imax + dir*lo) >= 0 > s(imax + dir*hi)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        stats.binary_search_steps += 1
        if s((imax + direction * mid) % D) < -ztol:
            hi = mid
        else:
            lo = mid
    return (imax + direction * lo) % D, (imax + direction * hi) % D


def batch_section_descend(H: Hierarchy, planes, objectives, stats: QueryStats | None = None):
    """Run many section descents level-synchronously.

    Same algorithm as `_section_descend` (identical decisions per query),
    but the per-level kill checks run as array operations across all
    queries; only the sparse cut and endpoint-refresh events fall back to
    scalar code.  `planes` is a (q, 4) array of [nx, ny, nz, d] rows and
    `objectives` a (q, 3) array.  Returns a list of (u, v, pair, x) per
    query, with None marking an empty section.
    """
    import numpy as np

    if stats is None:
        stats = QueryStats()
    planes = np.asarray(planes, dtype=float)
    objectives = np.asarray(objectives, dtype=float)
    q = len(planes)
    pts_np, birth_np, killer_np, rows_n, rows_o, tri_keys, tri_vids, base = H.arrays()

    N = planes[:, :3]
    dvec = planes[:, 3]
    ztol = 1e-10 * np.abs(N).sum(axis=1) * max(H.scale, 1.0)

    # ---- seeding on the core
    cv = np.asarray(H.core_vertices, dtype=np.int64)
    pos = {int(w): k for k, w in enumerate(cv)}
    CP = pts_np[cv]  # (Vc, 3)
    S = N @ CP.T - dvec[:, None]  # (q, Vc)
    VALS = objectives @ CP.T  # (q, Vc)
    stats.vertex_inspections += q * len(cv)

    bestval = np.full(q, -np.inf)
    u = np.full(q, -1, dtype=np.int64)
    v = np.full(q, -1, dtype=np.int64)
    pa = np.full(q, -1, dtype=np.int64)
    pb = np.full(q, -1, dtype=np.int64)
    x = np.zeros((q, 3))

    zt = ztol[:, None]
    onplane = np.abs(S) <= zt
    if onplane.any():
        VV = np.where(onplane, VALS, -np.inf)
        k = VV.argmax(axis=1)
        val = VV[np.arange(q), k]
        better = val > bestval
        if better.any():
            w = cv[k[better]]
            u[better] = w
            v[better] = w
            x[better] = pts_np[w]
            bestval[better] = val[better]

    tris = H.store.tris
    for (a, b) in H.core_edges:
        ia, ib = pos[a], pos[b]
        sa = S[:, ia]
        sb = S[:, ib]
        cross = ((sa > ztol) & (sb < -ztol)) | ((sa < -ztol) & (sb > ztol))
        if not cross.any():
            continue
        lam = sa[cross] / (sa[cross] - sb[cross])
        xx = CP[ia] + lam[:, None] * (CP[ib] - CP[ia])
        val = (objectives[cross] * xx).sum(axis=1)
        better = val > bestval[cross]
        if better.any():
            idx = np.nonzero(cross)[0][better]
            ta = tris[a]
            tb = tris[b]
            shared = [lab for lab in ta if lab in tb]
            u[idx] = a
            v[idx] = b
            pa[idx] = shared[0]
            pb[idx] = shared[1]
            x[idx] = xx[better]
            bestval[idx] = val[better]

    alive = bestval > -np.inf

    # ---- level-synchronous descent
    for l in range(H.depth - 1, -1, -1):
        stats.levels_visited += 1
        act = np.nonzero(alive)[0]
        if len(act) == 0:
            break
        uu = u[act]
        vv = v[act]
        ku = np.where(birth_np[uu] == l + 1, killer_np[uu], -1)
        kv = np.where(birth_np[vv] == l + 1, killer_np[vv], -1)
        kv = np.where(vv == uu, -1, kv)

        cut = np.full(len(act), -1, dtype=np.int64)
        for side in (ku, kv):
            cand = (side >= 0) & (cut < 0)
            if not cand.any():
                continue
            rows = side[cand]
            xa = x[act[cand]]
            excess = (rows_n[rows] * xa).sum(axis=1) - rows_o[rows]
            stats.vertex_inspections += int(cand.sum())
            hit = excess > ztol[act[cand]]
            if hit.any():
                tgt = np.nonzero(cand)[0][hit]
                cut[tgt] = rows[hit]

        cut_idx = np.nonzero(cut >= 0)[0]
        if len(cut_idx):
            gis = act[cut_idx]
            gfac = cut[cut_idx]
            flat, offs, lens = _level_csr(H, l)
            L = lens[gfac]
            vec = L <= 64
            # bucket padded batches by size so tiny cycles stay tiny
            for lovec, hivec in ((3, 6), (7, 12), (13, 64)):
                sel = vec & (L >= lovec) & (L <= hivec)
                if not sel.any():
                    continue
                noise_gi = _segment_level_batch(
                    H, gis[sel], gfac[sel], flat, offs, L[sel],
                    N, dvec, objectives, ztol, u, v, pa, pb, x, alive, stats,
                )
                if noise_gi:
                    tpos = {int(gg): tt for gg, tt in zip(gis, cut_idx)}
                    for gi in noise_gi:
                        cut[tpos[gi]] = -2
            for t, gi, g in zip(cut_idx[~vec], gis[~vec], gfac[~vec]):
                gi = int(gi)
                g = int(g)
                nq = (N[gi, 0], N[gi, 1], N[gi, 2])
                cq = (objectives[gi, 0], objectives[gi, 1], objectives[gi, 2])
                sec = _segment_on_facet(
                    H, l, g, nq, float(dvec[gi]), cq, float(ztol[gi]), stats
                )
                if sec is None:
                    gn, goff = H.rows[g]
                    ex = gn[0] * x[gi, 0] + gn[1] * x[gi, 1] + gn[2] * x[gi, 2] - goff
                    if ex > 1000.0 * ztol[gi]:
                        alive[gi] = False
                    else:
                        cut[t] = -2  # noise-floor call: survives, allow refresh
                    continue
                su, sv, spair, sx = sec
                u[gi] = su
                v[gi] = sv
                if spair is None:
                    pa[gi] = -1
                    pb[gi] = -1
                else:
                    pa[gi] = spair[0]
                    pb[gi] = spair[1]
                x[gi] = sx

        # refresh surviving endpoints whose vertices died this transition:
        # the new endpoint of the tracked edge is the vertex on the edge's
        # facet pair plus the killer, found by one sorted-key search
        for side, karr in ((u, ku), (v, kv)):
            need = (karr >= 0) & (cut < 0)
            if not need.any():
                continue
            tsel = np.nonzero(need)[0]
            gi = act[tsel]
            okm = alive[gi] & (pa[gi] >= 0)
            if not okm.any():
                continue
            tsel = tsel[okm]
            gi = gi[okm]
            tri = np.sort(
                np.stack([pa[gi], pb[gi], karr[tsel]], axis=1), axis=1
            )
            key = (tri[:, 0] * base + tri[:, 1]) * base + tri[:, 2]
            loc = np.searchsorted(tri_keys, key)
            loc = np.minimum(loc, len(tri_keys) - 1)
            hit = tri_keys[loc] == key
            side[gi[hit]] = tri_vids[loc[hit]]

    out = []
    for i in range(q):
        if not alive[i]:
            out.append(None)
        elif pa[i] < 0:
            out.append((int(u[i]), int(v[i]), None, tuple(x[i])))
        else:
            out.append((int(u[i]), int(v[i]), (int(pa[i]), int(pb[i])), tuple(x[i])))
    return out


def _level_csr(H, level):
    """Flat vid array + offsets + lengths of every facet cycle at a level.

    Indexed by facet label; built once per level and cached, this lets a
    whole level's segment searches run as padded array operations.
    """
    import numpy as np

    cache = getattr(H, "_csr", None)
    if cache is None:
        cache = {}
        H._csr = cache
    got = cache.get(level)
    if got is None:
        import itertools

        cyc = H.levels[level].cycles
        nlab = H.m + 1
        offs = np.zeros(nlab + 1, dtype=np.int64)
        lens = np.zeros(nlab, dtype=np.int64)
        ordered = []
        pos = 0
        for f in range(nlab):
            c = cyc.get(f)
            offs[f] = pos
            if c is not None:
                lens[f] = len(c)
                ordered.append(c)
                pos += len(c)
        offs[nlab] = pos
        flat = np.fromiter(
            itertools.chain.from_iterable(ordered), dtype=np.int64, count=pos
        )
        got = (flat, offs, lens)
        cache[level] = got
    return got


def _segment_level_batch(H, gis, gfac, flat, offs, L, N, dvec, objectives, ztol, u, v, pa, pb, x, alive, stats):
    """All of one level's segment searches as padded array operations.

    Candidate set matches the scalar scan path: on-plane cycle vertices
    plus strict transversal edge crossings; the best candidate per query
    wins.  Returns global indices of noise-floor survivors (marginally
    cut but their killer facet never meets the plane).
    """
    import numpy as np

    arrays = H.arrays()
    pts_np = arrays[0]
    tris_np = _tris_np(H)
    nq = len(gis)
    Lmax = int(L.max())
    ar = np.arange(Lmax, dtype=np.int64)
    base = offs[gfac][:, None]
    inside = ar[None, :] < L[:, None]
    idx = base + np.where(inside, ar[None, :], 0)
    nxt = np.where(ar[None, :] + 1 < L[:, None], ar[None, :] + 1, 0)
    idx_b = base + nxt
    W = flat[idx]          # (nq, Lmax) vertex ids, padded with the cycle head
    WB = flat[idx_b]
    P = pts_np[W]          # (nq, Lmax, 3)
    PB = pts_np[WB]
    stats.vertex_inspections += int(L.sum())

    Ng = N[gis]
    S = (P * Ng[:, None, :]).sum(axis=2) - dvec[gis][:, None]
    SB = (PB * Ng[:, None, :]).sum(axis=2) - dvec[gis][:, None]
    zt = ztol[gis][:, None]

    OBJ = objectives[gis]
    onp = (np.abs(S) <= zt) & inside
    crossing = (((S > zt) & (SB < -zt)) | ((S < -zt) & (SB > zt))) & inside

    VAL = np.full((nq, 2 * Lmax), -np.inf)
    if onp.any():
        Vvert = (P * OBJ[:, None, :]).sum(axis=2)
        VAL[:, :Lmax][onp] = Vvert[onp]
    # crossing points only where a crossing actually happens
    cr_r, cr_c = np.nonzero(crossing)
    if len(cr_r):
        Sa = S[cr_r, cr_c]
        Sb = SB[cr_r, cr_c]
        lam = (Sa / (Sa - Sb))[:, None]
        Pa = P[cr_r, cr_c]
        Xc = Pa + lam * (PB[cr_r, cr_c] - Pa)
        VAL[cr_r, Lmax + cr_c] = (Xc * OBJ[cr_r]).sum(axis=1)
    k = VAL.argmax(axis=1)
    bestv = VAL[np.arange(nq), k]
    found = bestv > -np.inf

    # vertex-type winners
    vert_w = found & (k < Lmax)
    if vert_w.any():
        r = np.nonzero(vert_w)[0]
        kk = k[r]
        gi = gis[r]
        w = W[r, kk]
        u[gi] = w
        v[gi] = w
        pa[gi] = -1
        pb[gi] = -1
        x[gi] = P[r, kk]

    # crossing-type winners: facet pair = shared labels of the two triples
    crs_w = found & (k >= Lmax)
    if crs_w.any():
        r = np.nonzero(crs_w)[0]
        kk = k[r] - Lmax
        gi = gis[r]
        wa = W[r, kk]
        wb = WB[r, kk]
        cat = np.sort(np.concatenate([tris_np[wa], tris_np[wb]], axis=1), axis=1)
        dup = cat[:, 1:] == cat[:, :-1]
        ok = dup.sum(axis=1) == 2
        pairs = np.full((len(r), 2), -1, dtype=np.int64)
        if ok.any():
            pairs[ok] = cat[:, :-1][ok][dup[ok]].reshape(-1, 2)
        Sa = S[r, kk]
        Sb = SB[r, kk]
        lam = (Sa / (Sa - Sb))[:, None]
        Pa = P[r, kk]
        u[gi] = wa
        v[gi] = wb
        pa[gi] = pairs[:, 0]
        pb[gi] = pairs[:, 1]
        x[gi] = Pa + lam * (PB[r, kk] - Pa)

    noise: list[int] = []
    if not found.all():
        rows_n = arrays[3]
        rows_o = arrays[4]
        for r in np.nonzero(~found)[0]:
            gi = int(gis[r])
            g = int(gfac[r])
            gn = rows_n[g]
            ex = gn[0] * x[gi, 0] + gn[1] * x[gi, 1] + gn[2] * x[gi, 2] - rows_o[g]
            if ex > 1000.0 * ztol[gi]:
                alive[gi] = False
            else:
                noise.append(gi)
    return noise


def _tris_np(H):
    import numpy as np

    arr = getattr(H, "_tris_np", None)
    if arr is None or len(arr) != len(H.store.tris):
        arr = np.asarray(H.store.tris, dtype=np.int64)
        H._tris_np = arr
    return arr


def _extreme_index(s, D, stats: QueryStats):
    """Index of the cyclic maximum of a linear functional over a convex
    vertex cycle.

    Classic extreme-vertex binary search on the single ascent/descent sign
    change of the edge increments; exact float comparisons, so a flat or
    noisy plateau can defeat it -- the result is verified to be a local
    maximum and a linear scan takes over otherwise.
    """
    if D <= 8:
        vals = [s(i) for i in range(D)]
        return max(range(D), key=lambda i: (vals[i], -i))

    memo: dict[int, float] = {}

    def sv(i):
        i %= D
        v = memo.get(i)
        if v is None:
            v = s(i)
            memo[i] = v
        return v

    def ascending(i):
        stats.binary_search_steps += 1
        return sv(i + 1) > sv(i)

    def is_peak(i):
        return not ascending(i) and ascending(i - 1)

    if is_peak(0):
        return 0
    lo, hi = 0, D
    steps_cap = 4 * D.bit_length() + 16
    steps = 0
    while lo + 1 < hi and steps < steps_cap:
        steps += 1
        mid = (lo + hi) // 2
        if is_peak(mid):
            return mid
        alo = ascending(lo)
        amid = ascending(mid)
        if alo and not amid:
            hi = mid
        elif not alo and amid:
            lo = mid
        elif alo:  # both ascending: past the valley iff value dropped
            if sv(lo) > sv(mid):
                hi = mid
            else:
                lo = mid
        else:  # both descending: climbed back iff value rose
            if sv(lo) < sv(mid):
                hi = mid
            else:
                lo = mid
    cand = lo % D
    if is_peak(cand):
        return cand
    # plateau or noise: exact fallback
    vals = [s(i) for i in range(D)]
    return max(range(D), key=lambda i: (vals[i], -i))
