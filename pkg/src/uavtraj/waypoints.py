"""Waypoint placement for a fixed visiting order.

Given the order, choosing one point per disk to minimize the total path
length is convex. It is solved by block coordinate descent where each
block update (one waypoint, neighbours fixed) is solved exactly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .model import Point, as_point, distance


@dataclass(frozen=True)
class DiskChainInstance:
    start: Point
    end: Point
    disks: tuple[tuple[Point, float], ...]

    def __post_init__(self):
        object.__setattr__(self, "start", as_point(self.start))
        object.__setattr__(self, "end", as_point(self.end))
        disks = tuple((as_point(c), float(r)) for c, r in self.disks)
        if any(r < 0 for _, r in disks):
            raise ValueError("disk radii must be >= 0")
        object.__setattr__(self, "disks", disks)

    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        centers = np.array([c for c, _ in self.disks], dtype=float).reshape(-1, 2)
        radii = np.array([r for _, r in self.disks], dtype=float)
        return centers, radii

    def length(self, waypoints) -> float:
        pts = [self.start, *waypoints, self.end]
        return sum(distance(pts[i - 1], pts[i]) for i in range(1, len(pts)))


@dataclass(frozen=True)
class DiskChainSolution:
    waypoints: tuple[Point, ...]
    length: float
    iterations: int
    converged: bool


def single_disk_step(a, b, center, radius: float) -> Point:
    """Point of the closed disk minimizing |q - a| + |q - b|.

    When the segment [a, b] crosses the disk the optimum is not unique;
    the point of the segment closest to the center is returned.
    """
    a, b, c = as_point(a), as_point(b), as_point(center)
    if radius < 0:
        raise ValueError("radius must be >= 0")
    x, y = _kernels.disk_step(a.x, a.y, b.x, b.y, c.x, c.y, float(radius))
    return Point(x, y)


def solve_disk_chain(
    instance: DiskChainInstance, tol: float = 1e-6, max_iters: int = 10000
) -> DiskChainSolution:
    """Shortest start -> disk_1 -> ... -> disk_K -> end path, order fixed.

    Waypoints start at the disk centers and are updated forward then
    backward; iteration stops once a double sweep gains less than ``tol``.
    If ``max_iters`` double sweeps run out, the last iterate comes back
    with ``converged=False``.
    """
    if tol <= 0:
        raise ValueError("tol must be > 0")
    if max_iters < 1:
        raise ValueError("max_iters must be >= 1")
    centers, radii = instance.arrays()
    s, e = instance.start, instance.end
    q, length, iters, converged = _kernels.solve_chain(
        s.x, s.y, e.x, e.y, centers, radii, float(tol), int(max_iters)
    )
    return DiskChainSolution(
        waypoints=tuple(Point(float(x), float(y)) for x, y in q),
        length=float(length),
        iterations=int(iters),
        converged=bool(converged),
    )
