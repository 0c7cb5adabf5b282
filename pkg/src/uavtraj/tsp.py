"""Open-path TSP ordering with both endpoints fixed."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .model import TOL_GEO, Point, as_point, distance


@dataclass(frozen=True)
class TourInstance:
    start: Point
    end: Point
    sites: tuple[tuple[int, Point], ...]

    def __post_init__(self):
        object.__setattr__(self, "start", as_point(self.start))
        object.__setattr__(self, "end", as_point(self.end))
        sites = tuple((int(i), as_point(p)) for i, p in self.sites)
        if len({i for i, _ in sites}) != len(sites):
            raise ValueError("site ids must be distinct")
        object.__setattr__(self, "sites", sites)

    def _sorted(self):
        return sorted(self.sites)

    def _points(self) -> np.ndarray:
        rows = [self.start, *(p for _, p in self._sorted()), self.end]
        return np.array(rows, dtype=float)


def nearest_neighbor_order(instance: TourInstance) -> tuple[int, ...]:
    """Greedy construction only, used as the 2-opt starting tour."""
    sites = instance._sorted()
    if not sites:
        return ()
    route = _kernels.nearest_neighbor(instance._points())
    return tuple(sites[j - 1][0] for j in route[1:-1])


def order_sites(instance: TourInstance) -> tuple[int, ...]:
    """Visiting order for the sites: nearest neighbour from the start, then 2-opt.

    The path always ends at ``instance.end``; ties go to the lower id.
    """
    sites = instance._sorted()
    if len(sites) <= 1:
        return tuple(i for i, _ in sites)
    pts = instance._points()
    route = _kernels.nearest_neighbor(pts)
    route = _kernels.two_opt(pts, route, TOL_GEO)
    return tuple(sites[j - 1][0] for j in route[1:-1])


def path_length(instance: TourInstance, order) -> float:
    lookup = dict(instance.sites)
    order = list(order)
    if len(set(order)) != len(order):
        raise ValueError("order repeats a site")
    if set(order) != set(lookup):
        missing = set(lookup) - set(order)
        unknown = set(order) - set(lookup)
        raise ValueError(f"order is not a permutation of the sites (missing={missing}, unknown={unknown})")
    pts = [instance.start, *(lookup[i] for i in order), instance.end]
    return sum(distance(pts[k - 1], pts[k]) for k in range(1, len(pts)))
