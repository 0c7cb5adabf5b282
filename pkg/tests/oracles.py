"""Brute-force reference solvers used only by the tests.

None of these share code with the package's solvers.
"""

import itertools
import math

import numpy as np


_PERMS = {}


def brute_force_open_path(start, end, sites):
    """Exact shortest open path over all permutations; returns (length, order)."""
    n = len(sites)
    if n == 0:
        return math.dist(start, end), ()
    if n not in _PERMS:
        _PERMS[n] = np.array(list(itertools.permutations(range(n))), dtype=np.int64)
    perms = _PERMS[n]
    pts = np.array([p for _, p in sites], dtype=float)
    d = np.hypot(*(pts[:, None, :] - pts[None, :, :]).transpose(2, 0, 1))
    cost = np.hypot(*(pts - np.asarray(start, dtype=float)).T)[perms[:, 0]]
    for k in range(1, n):
        cost = cost + d[perms[:, k - 1], perms[:, k]]
    cost = cost + np.hypot(*(pts - np.asarray(end, dtype=float)).T)[perms[:, -1]]
    j = int(np.argmin(cost))
    return float(cost[j]), tuple(sites[i][0] for i in perms[j])


def _candidates(center, r, focus, half, n_grid, n_arc):
    c = np.asarray(center, dtype=float)
    if r == 0:
        return c[None, :]
    focus = np.asarray(focus, dtype=float)
    g = np.linspace(-half, half, n_grid)
    gx, gy = np.meshgrid(focus[0] + g, focus[1] + g)
    pts = np.column_stack([gx.ravel(), gy.ravel()])
    pts = pts[np.hypot(*(pts - c).T) <= r]
    parts = [pts, focus[None, :]]
    off = focus - c
    rho = math.hypot(*off)
    if rho >= r - 1.5 * half:
        th0 = math.atan2(off[1], off[0]) if rho > 0 else 0.0
        dth = min(math.pi, 1.5 * half / r) if r > 0 else math.pi
        th = th0 + np.linspace(-dth, dth, n_arc)
        parts.append(c + r * np.column_stack([np.cos(th), np.sin(th)]))
    return np.vstack(parts)


def _dp(start, end, cand):
    """Exact shortest path picking one candidate per layer; returns (length, points)."""
    cost = np.hypot(*(cand[0] - start).T)
    back = []
    for k in range(1, len(cand)):
        d = np.hypot(*(cand[k][None, :, :] - cand[k - 1][:, None, :]).transpose(2, 0, 1))
        tot = cost[:, None] + d
        idx = np.argmin(tot, axis=0)
        back.append(idx)
        cost = tot[idx, np.arange(tot.shape[1])]
    cost = cost + np.hypot(*(cand[-1] - end).T)
    j = int(np.argmin(cost))
    best = float(cost[j])
    chosen = [j]
    for idx in reversed(back):
        chosen.append(int(idx[chosen[-1]]))
    chosen.reverse()
    return best, [cand[k][chosen[k]] for k in range(len(cand))]


def grid_chain_oracle(start, end, disks, final_half=1e-4):
    """Shortest start -> disks -> end path by recursive grid refinement.

    Every level searches the product of per-disk candidate grids exactly
    (dynamic programming over the chain), re-centres on the best points,
    and halves the window once a level stops improving.
    """
    start = np.asarray(start, dtype=float)
    end = np.asarray(end, dtype=float)
    if not disks:
        return float(np.hypot(*(end - start))), []
    cand = [_candidates(c, r, c, r, 41, 721) for c, r in disks]
    best, pts = _dp(start, end, cand)
    half = max(max(r for _, r in disks) / 10.0, 1e-9)
    while half > final_half:
        cand = [_candidates(c, r, p, half, 15, 31) for (c, r), p in zip(disks, pts)]
        val, new_pts = _dp(start, end, cand)
        if val < best - 1e-12:
            improved = best - val > 1e-3 * half
            best, pts = val, new_pts
            if improved:
                continue
        half /= 2.0
    return best, pts


def quantize_uniform(x, W, S):
    """Round to the nearest of 2**S evenly spaced levels covering [-W, W]."""
    step = 2.0 * W / (2**S - 1)
    return -W + np.round((x + W) / step) * step


def monte_carlo_mse(sigma2, W, S, K=1, n=10**6, seed=1234):
    """Empirical MSE of averaging K readings with Gaussian noise plus uniform-quantizer error."""
    rng = np.random.default_rng(seed)
    m = n // K
    x = rng.uniform(-W, W, size=(m, K))
    q_err = quantize_uniform(x, W, S) - x
    noise = rng.normal(0.0, math.sqrt(sigma2), size=(m, K)) if sigma2 > 0 else 0.0
    est_err = np.mean(noise + q_err, axis=1)
    return float(np.mean(est_err**2))


def sampled_visits(centers, radii, traj, dt):
    """Visit flags from sampling the position every ``dt`` seconds."""
    T = traj.times[-1]
    ts = np.arange(0.0, T + dt / 2, dt)
    pos = np.array([traj.position(t) for t in ts])
    d = np.hypot(*(pos[None, :, :] - np.asarray(centers)[:, None, :]).transpose(2, 0, 1))
    return np.any(d <= np.asarray(radii)[:, None], axis=1)
