"""Compiled inner loops for the disk-chain solver and the open-path TSP.

Everything here works on plain floats and float64 arrays so numba can
compile it; the public wrappers live in ``waypoints`` and ``tsp``.
"""

import math

import numpy as np
from numba import njit

_INVPHI = (math.sqrt(5.0) - 1.0) / 2.0
ARC_SAMPLES = 32
ANGLE_TOL = 1e-10
COINCIDE_TOL = 1e-4
PAIR_TOL = 1e-5
STEP_GAIN = 1e-9
MAX_ESCAPES = 1000


@njit(cache=True)
def _pair_cost(qx, qy, ax, ay, bx, by):
    return math.hypot(qx - ax, qy - ay) + math.hypot(qx - bx, qy - by)


@njit(cache=True)
def _arc_cost(theta, cx, cy, r, ax, ay, bx, by):
    return _pair_cost(cx + r * math.cos(theta), cy + r * math.sin(theta), ax, ay, bx, by)


@njit(cache=True)
def segment_disk_interval(ax, ay, bx, by, cx, cy, r):
    """Parameter range [lo, hi] of a + t(b - a), t in [0, 1], inside the disk.

    Returns (lo, hi, ok); ok is False when the segment misses the disk.
    """
    dx = bx - ax
    dy = by - ay
    fx = ax - cx
    fy = ay - cy
    A = dx * dx + dy * dy
    C = fx * fx + fy * fy - r * r
    if A == 0.0:
        if C <= 0.0:
            return 0.0, 1.0, True
        return 0.0, 0.0, False
    B = 2.0 * (dx * fx + dy * fy)
    disc = B * B - 4.0 * A * C
    if disc < 0.0:
        return 0.0, 0.0, False
    sq = math.sqrt(disc)
    lo = max((-B - sq) / (2.0 * A), 0.0)
    hi = min((-B + sq) / (2.0 * A), 1.0)
    if lo > hi:
        return 0.0, 0.0, False
    return lo, hi, True


@njit(cache=True)
def disk_step(ax, ay, bx, by, cx, cy, r):
    """Minimizer of |q - a| + |q - b| over the closed disk (c, r)."""
    if r <= 0.0:
        return cx, cy
    dx = bx - ax
    dy = by - ay
    ab2 = dx * dx + dy * dy
    if ab2 <= 1e-24:
        ex = ax - cx
        ey = ay - cy
        de = math.hypot(ex, ey)
        if de <= r:
            return ax, ay
        return cx + r * ex / de, cy + r * ey / de
    t = ((cx - ax) * dx + (cy - ay) * dy) / ab2
    if t < 0.0:
        t = 0.0
    elif t > 1.0:
        t = 1.0
    px = ax + t * dx
    py = ay + t * dy
    if math.hypot(px - cx, py - cy) <= r:
        return px, py

    # Segment misses the disk: the optimum is on the arc between the
    # directions towards a and b (the shorter one).
    th_a = math.atan2(ay - cy, ax - cx)
    th_b = math.atan2(by - cy, bx - cx)
    span = th_b - th_a
    while span > math.pi:
        span -= 2.0 * math.pi
    while span < -math.pi:
        span += 2.0 * math.pi
    best_i = 0
    best_f = math.inf
    for i in range(ARC_SAMPLES + 1):
        f = _arc_cost(th_a + span * i / ARC_SAMPLES, cx, cy, r, ax, ay, bx, by)
        if f < best_f:
            best_f = f
            best_i = i
    lo = th_a + span * max(best_i - 1, 0) / ARC_SAMPLES
    hi = th_a + span * min(best_i + 1, ARC_SAMPLES) / ARC_SAMPLES
    if lo > hi:
        lo, hi = hi, lo
    x1 = hi - _INVPHI * (hi - lo)
    x2 = lo + _INVPHI * (hi - lo)
    f1 = _arc_cost(x1, cx, cy, r, ax, ay, bx, by)
    f2 = _arc_cost(x2, cx, cy, r, ax, ay, bx, by)
    while hi - lo > ANGLE_TOL:
        if f1 <= f2:
            hi = x2
            x2 = x1
            f2 = f1
            x1 = hi - _INVPHI * (hi - lo)
            f1 = _arc_cost(x1, cx, cy, r, ax, ay, bx, by)
        else:
            lo = x1
            x1 = x2
            f1 = f2
            x2 = lo + _INVPHI * (hi - lo)
            f2 = _arc_cost(x2, cx, cy, r, ax, ay, bx, by)
    th = 0.5 * (lo + hi)
    if _arc_cost(th, cx, cy, r, ax, ay, bx, by) > best_f:
        th = th_a + span * best_i / ARC_SAMPLES
    return cx + r * math.cos(th), cy + r * math.sin(th)


@njit(cache=True)
def chain_length(q, sx, sy, ex, ey):
    k = q.shape[0]
    if k == 0:
        return math.hypot(ex - sx, ey - sy)
    total = math.hypot(q[0, 0] - sx, q[0, 1] - sy)
    for i in range(1, k):
        total += math.hypot(q[i, 0] - q[i - 1, 0], q[i, 1] - q[i - 1, 1])
    total += math.hypot(ex - q[k - 1, 0], ey - q[k - 1, 1])
    return total


@njit(cache=True)
def _update(q, i, sx, sy, ex, ey, centers, radii):
    k = q.shape[0]
    if i == 0:
        ax, ay = sx, sy
    else:
        ax, ay = q[i - 1, 0], q[i - 1, 1]
    if i == k - 1:
        bx, by = ex, ey
    else:
        bx, by = q[i + 1, 0], q[i + 1, 1]
    qx, qy = disk_step(ax, ay, bx, by, centers[i, 0], centers[i, 1], radii[i])
    q[i, 0] = qx
    q[i, 1] = qy


@njit(cache=True)
def _sweeps(q, sx, sy, ex, ey, centers, radii, tol, max_iters):
    k = q.shape[0]
    f = chain_length(q, sx, sy, ex, ey)
    iters = 0
    converged = False
    while iters < max_iters:
        for i in range(k):
            _update(q, i, sx, sy, ex, ey, centers, radii)
        for i in range(k - 1, -1, -1):
            _update(q, i, sx, sy, ex, ey, centers, radii)
        iters += 1
        fn = chain_length(q, sx, sy, ex, ey)
        if f - fn < tol:
            f = fn
            converged = True
            break
        f = fn
    return f, iters, converged


@njit(cache=True)
def _in_disk(x, y, cx, cy, r):
    return math.hypot(x - cx, y - cy) <= r + 1e-12


@njit(cache=True)
def _project(x, y, cx, cy, r):
    d = math.hypot(x - cx, y - cy)
    if d <= r:
        return x, y
    return cx + (x - cx) * r / d, cy + (y - cy) * r / d


@njit(cache=True)
def merged_group_point(ax, ay, bx, by, centers, radii, i0, i1):
    """Best single point in the intersection of disks i0..i1 for |q - a| + |q - b|.

    Returns (x, y, ok); ok is False when the intersection is empty.
    """
    lo, hi = 0.0, 1.0
    hit = True
    for i in range(i0, i1 + 1):
        l, h, ok = segment_disk_interval(ax, ay, bx, by, centers[i, 0], centers[i, 1], radii[i])
        if not ok:
            hit = False
            break
        lo = max(lo, l)
        hi = min(hi, h)
    if hit and lo <= hi:
        t = 0.5 * (lo + hi)
        return ax + t * (bx - ax), ay + t * (by - ay), True

    best_x, best_y, best_f = 0.0, 0.0, math.inf
    # optimum on one circle's arc: that disk's own minimizer, if inside the rest
    for i in range(i0, i1 + 1):
        x, y = disk_step(ax, ay, bx, by, centers[i, 0], centers[i, 1], radii[i])
        inside = True
        for j in range(i0, i1 + 1):
            if j != i and not _in_disk(x, y, centers[j, 0], centers[j, 1], radii[j]):
                inside = False
                break
        if inside:
            f = _pair_cost(x, y, ax, ay, bx, by)
            if f < best_f:
                best_x, best_y, best_f = x, y, f
    if best_f < math.inf:
        return best_x, best_y, True
    # otherwise at a corner where two circles cross
    for i in range(i0, i1 + 1):
        for j in range(i + 1, i1 + 1):
            dx = centers[j, 0] - centers[i, 0]
            dy = centers[j, 1] - centers[i, 1]
            d = math.hypot(dx, dy)
            r1 = radii[i]
            r2 = radii[j]
            if d == 0.0 or d > r1 + r2 or d < abs(r1 - r2):
                continue
            along = (r1 * r1 - r2 * r2 + d * d) / (2.0 * d)
            h = math.sqrt(max(r1 * r1 - along * along, 0.0))
            mx = centers[i, 0] + along * dx / d
            my = centers[i, 1] + along * dy / d
            for sgn in (-1.0, 1.0):
                x = mx - sgn * h * dy / d
                y = my + sgn * h * dx / d
                inside = True
                for m in range(i0, i1 + 1):
                    if not _in_disk(x, y, centers[m, 0], centers[m, 1], radii[m] + 1e-9):
                        inside = False
                        break
                if inside:
                    f = _pair_cost(x, y, ax, ay, bx, by)
                    if f < best_f:
                        best_x, best_y, best_f = x, y, f
    if best_f < math.inf:
        return best_x, best_y, True
    return 0.0, 0.0, False


@njit(cache=True)
def _neighbor(q, i, sx, sy, ex, ey):
    if i < 0:
        return sx, sy
    if i >= q.shape[0]:
        return ex, ey
    return q[i, 0], q[i, 1]


@njit(cache=True)
def _pair_value(x, y, ax, ay, bx, by, centers, radii, j0, j1):
    # |a - p| + min over the second group's common region of |p - v| + |v - b|
    vx, vy, ok = merged_group_point(x, y, bx, by, centers, radii, j0, j1)
    if not ok:
        return math.inf
    return math.hypot(x - ax, y - ay) + math.hypot(vx - x, vy - y) + math.hypot(bx - vx, by - vy)


@njit(cache=True)
def _chord(x, centers, radii, i0, i1):
    # y-interval of the vertical line through x inside disks i0..i1
    lo = -math.inf
    hi = math.inf
    for i in range(i0, i1 + 1):
        dx = x - centers[i, 0]
        h2 = radii[i] * radii[i] - dx * dx
        if h2 < 0.0:
            return 0.0, -1.0
        h = math.sqrt(h2)
        lo = max(lo, centers[i, 1] - h)
        hi = min(hi, centers[i, 1] + h)
    return lo, hi


@njit(cache=True)
def _edge(x_in, x_out, centers, radii, i0, i1, tol):
    # bisect for the x where the common region's vertical chords end
    while abs(x_out - x_in) > tol:
        mid = 0.5 * (x_in + x_out)
        lo, hi = _chord(mid, centers, radii, i0, i1)
        if lo <= hi:
            x_in = mid
        else:
            x_out = mid
    return x_in


@njit(cache=True)
def _golden(lo, hi, x, ax, ay, bx, by, centers, radii, i0, i1, j0, j1, tol):
    # inner search along the chord at x (x finite) or outer search across chords (x = nan)
    g = _INVPHI
    m1 = hi - g * (hi - lo)
    m2 = lo + g * (hi - lo)
    f1 = _golden_eval(m1, x, ax, ay, bx, by, centers, radii, i0, i1, j0, j1, tol)
    f2 = _golden_eval(m2, x, ax, ay, bx, by, centers, radii, i0, i1, j0, j1, tol)
    while hi - lo > tol:
        if f1 <= f2:
            hi = m2
            m2 = m1
            f2 = f1
            m1 = hi - g * (hi - lo)
            f1 = _golden_eval(m1, x, ax, ay, bx, by, centers, radii, i0, i1, j0, j1, tol)
        else:
            lo = m1
            m1 = m2
            f1 = f2
            m2 = lo + g * (hi - lo)
            f2 = _golden_eval(m2, x, ax, ay, bx, by, centers, radii, i0, i1, j0, j1, tol)
    return 0.5 * (lo + hi)


@njit(cache=True)
def _golden_eval(t, x, ax, ay, bx, by, centers, radii, i0, i1, j0, j1, tol):
    if not math.isnan(x):
        return _pair_value(x, t, ax, ay, bx, by, centers, radii, j0, j1)
    lo, hi = _chord(t, centers, radii, i0, i1)
    if lo > hi:
        return math.inf
    y = _golden_inner(lo, hi, t, ax, ay, bx, by, centers, radii, j0, j1, tol)
    return _pair_value(t, y, ax, ay, bx, by, centers, radii, j0, j1)


@njit(cache=True)
def _golden_inner(lo, hi, x, ax, ay, bx, by, centers, radii, j0, j1, tol):
    g = _INVPHI
    m1 = hi - g * (hi - lo)
    m2 = lo + g * (hi - lo)
    f1 = _pair_value(x, m1, ax, ay, bx, by, centers, radii, j0, j1)
    f2 = _pair_value(x, m2, ax, ay, bx, by, centers, radii, j0, j1)
    while hi - lo > tol:
        if f1 <= f2:
            hi = m2
            m2 = m1
            f2 = f1
            m1 = hi - g * (hi - lo)
            f1 = _pair_value(x, m1, ax, ay, bx, by, centers, radii, j0, j1)
        else:
            lo = m1
            m1 = m2
            f1 = f2
            m2 = lo + g * (hi - lo)
            f2 = _pair_value(x, m2, ax, ay, bx, by, centers, radii, j0, j1)
    return 0.5 * (lo + hi)


@njit(cache=True)
def pair_step(ax, ay, bx, by, px, py, centers, radii, i0, i1, j0, j1):
    """Jointly optimal p in the common region of disks i0..i1 and v in that
    of disks j0..j1 for |a - p| + |p - v| + |v - b|.

    Minimizing out v leaves a convex function of p, so a golden-section
    search across vertical chords of p's region, nested around one along
    each chord, is exact up to the search tolerance. (px, py) must lie in
    p's region. Returns (px, py, vx, vy, ok).
    """
    scale = 1.0
    for i in range(i0, i1 + 1):
        scale = max(scale, radii[i])
    tol = PAIR_TOL * scale
    left = math.inf
    right = -math.inf
    for i in range(i0, i1 + 1):
        left = min(left, centers[i, 0] - radii[i])
        right = max(right, centers[i, 0] + radii[i])
    lo, hi = _chord(px, centers, radii, i0, i1)
    if lo <= hi:
        x0 = _edge(px, left - 1.0, centers, radii, i0, i1, tol)
        x1 = _edge(px, right + 1.0, centers, radii, i0, i1, tol)
        x = _golden(x0, x1, math.nan, ax, ay, bx, by, centers, radii, i0, i1, j0, j1, tol)
        lo, hi = _chord(x, centers, radii, i0, i1)
        if lo <= hi:
            y = _golden_inner(lo, hi, x, ax, ay, bx, by, centers, radii, j0, j1, tol)
            if _pair_value(x, y, ax, ay, bx, by, centers, radii, j0, j1) <= _pair_value(
                px, py, ax, ay, bx, by, centers, radii, j0, j1
            ):
                px = x
                py = y
    vx, vy, ok = merged_group_point(px, py, bx, by, centers, radii, j0, j1)
    return px, py, vx, vy, ok


@njit(cache=True)
def _split_run(q, i0, k, i1, sx, sy, ex, ey, centers, radii):
    """Split the coincident run i0..i1 after position k and re-solve both
    halves (each kept merged) jointly. Returns (trial, ok)."""
    ax, ay = _neighbor(q, i0 - 1, sx, sy, ex, ey)
    bx, by = _neighbor(q, i1 + 1, sx, sy, ex, ey)
    px, py, vx, vy, ok = pair_step(ax, ay, bx, by, q[i0, 0], q[i0, 1],
                                   centers, radii, i0, k, k + 1, i1)
    trial = q.copy()
    if not ok:
        return trial, False
    for j in range(i0, k + 1):
        trial[j, 0] = px
        trial[j, 1] = py
    for j in range(k + 1, i1 + 1):
        trial[j, 0] = vx
        trial[j, 1] = vy
    return trial, chain_length(trial, sx, sy, ex, ey) < chain_length(q, sx, sy, ex, ey)


@njit(cache=True)
def solve_chain(sx, sy, ex, ey, centers, radii, tol, max_iters):
    """Block coordinate descent over the waypoints, one disk at a time.

    Returns (waypoints, length, iterations, converged).
    """
    k = centers.shape[0]
    q = centers.copy()
    if k == 0:
        return q, chain_length(q, sx, sy, ex, ey), 0, True
    f, iters, converged = _sweeps(q, sx, sy, ex, ey, centers, radii, tol, max_iters)

    # Nonsmooth guard. Single-block moves stall once consecutive waypoints
    # meet, so near-coincident runs get joint moves: merging the run at
    # its best common point, or cutting it in two and solving that
    # two-block problem exactly. A move is kept only if the re-swept
    # length improves.
    for _ in range(MAX_ESCAPES):
        improved = False
        i0 = 0
        while i0 < k - 1:
            i1 = i0
            while i1 + 1 < k and math.hypot(
                q[i1 + 1, 0] - q[i0, 0], q[i1 + 1, 1] - q[i0, 1]
            ) <= COINCIDE_TOL:
                i1 += 1
            if i1 == i0:
                i0 += 1
                continue
            ax, ay = _neighbor(q, i0 - 1, sx, sy, ex, ey)
            bx, by = _neighbor(q, i1 + 1, sx, sy, ex, ey)
            trials = []
            x, y, ok = merged_group_point(ax, ay, bx, by, centers, radii, i0, i1)
            if ok:
                trial = q.copy()
                for i in range(i0, i1 + 1):
                    trial[i, 0] = x
                    trial[i, 1] = y
                trials.append(trial)
            for kk in range(i0, i1):
                trial, ok = _split_run(q, i0, kk, i1, sx, sy, ex, ey, centers, radii)
                if ok:
                    trials.append(trial)
            for trial in trials:
                # a joint move that does not shorten the chain by itself is skipped
                if chain_length(trial, sx, sy, ex, ey) >= f - STEP_GAIN:
                    continue
                if iters < max_iters:
                    ft, it2, conv2 = _sweeps(
                        trial, sx, sy, ex, ey, centers, radii, tol, max_iters - iters
                    )
                else:
                    ft = chain_length(trial, sx, sy, ex, ey)
                    it2 = 0
                    conv2 = converged
                if ft < f - tol:
                    q[:, :] = trial
                    f = ft
                    iters += it2
                    converged = conv2
                    improved = True
                    break
            i0 = i1 + 1
        if not improved:
            break
    return q, f, iters, converged


@njit(cache=True)
def _dist(pts, i, j):
    return math.hypot(pts[i, 0] - pts[j, 0], pts[i, 1] - pts[j, 1])


@njit(cache=True)
def nearest_neighbor(pts):
    """Greedy open path over ``pts`` rows: start, sites..., end.

    Returns the full route as row indices, start first and end last.
    Ties go to the lower index.
    """
    n = pts.shape[0] - 2
    route = np.empty(n + 2, dtype=np.int64)
    route[0] = 0
    route[n + 1] = n + 1
    used = np.zeros(n + 2, dtype=np.bool_)
    cur = 0
    for pos in range(1, n + 1):
        best = -1
        best_d = math.inf
        for j in range(1, n + 1):
            if used[j]:
                continue
            d = _dist(pts, cur, j)
            if d < best_d:
                best_d = d
                best = j
        used[best] = True
        route[pos] = best
        cur = best
    return route


@njit(cache=True)
def two_opt(pts, route, tol):
    """First-improvement 2-opt on an open path; both ends stay pinned.

    Pairs (i, j) are scanned lexicographically and the scan restarts
    after every accepted reversal. Modifies ``route`` in place.
    """
    n = route.shape[0] - 2
    improved = True
    while improved:
        improved = False
        for i in range(1, n + 1):
            for j in range(i + 1, n + 1):
                delta = (
                    _dist(pts, route[i - 1], route[j])
                    + _dist(pts, route[i], route[j + 1])
                    - _dist(pts, route[i - 1], route[i])
                    - _dist(pts, route[j], route[j + 1])
                )
                if delta < -tol:
                    lo = i
                    hi = j
                    while lo < hi:
                        tmp = route[lo]
                        route[lo] = route[hi]
                        route[hi] = tmp
                        lo += 1
                        hi -= 1
                    improved = True
                    break
            if improved:
                break
    return route
