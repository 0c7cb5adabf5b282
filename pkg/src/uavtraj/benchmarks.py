"""Baseline coverage sweeps: boustrophedon strips and zig-zag lines.

Both work in a frame whose u-axis runs from the start to the end point
and whose v-axis is perpendicular to it. The sweep extends ``height / 2``
on either side of that line, clipped to the area of interest, and the
spacing between parallel passes is twice the smallest coverage radius.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .model import Point, Scenario, Trajectory, distance, polyline_length, polyline_to_trajectory

HEIGHT_TOL = 1.0


@dataclass(frozen=True)
class AreaOfInterest:
    xmin: float
    ymin: float
    xmax: float
    ymax: float

    def __post_init__(self):
        if not (self.xmax > self.xmin and self.ymax > self.ymin):
            raise ValueError("area must have positive width and height")

    @classmethod
    def centered(cls, width: float, height: float) -> "AreaOfInterest":
        return cls(-width / 2, -height / 2, width / 2, height / 2)

    @property
    def diagonal(self) -> float:
        return math.hypot(self.xmax - self.xmin, self.ymax - self.ymin)

    def contains(self, p, tol: float = 0.0) -> bool:
        return (self.xmin - tol <= p[0] <= self.xmax + tol
                and self.ymin - tol <= p[1] <= self.ymax + tol)


class _Frame:
    def __init__(self, scenario: Scenario):
        self.origin = scenario.start
        self.length = distance(scenario.start, scenario.end)
        if self.length > 0:
            self.eu = ((scenario.end.x - scenario.start.x) / self.length,
                       (scenario.end.y - scenario.start.y) / self.length)
        else:
            self.eu = (1.0, 0.0)
        self.ev = (-self.eu[1], self.eu[0])

    def to_xy(self, u: float, v: float) -> Point:
        return Point(self.origin.x + u * self.eu[0] + v * self.ev[0],
                     self.origin.y + u * self.eu[1] + v * self.ev[1])

    def cross_section(self, area: AreaOfInterest, u: float) -> tuple[float, float]:
        """v-range of the area along the transverse line at ``u``.

        The range is widened to include v = 0 so a sweep never leaves
        the start-end line when that line runs outside the area.
        """
        px, py = self.to_xy(u, 0.0)
        lo, hi = -math.inf, math.inf
        for p, d, a, b in ((px, self.ev[0], area.xmin, area.xmax),
                           (py, self.ev[1], area.ymin, area.ymax)):
            if abs(d) < 1e-15:
                if not a <= p <= b:
                    return 0.0, 0.0
                continue
            t1, t2 = (a - p) / d, (b - p) / d
            lo, hi = max(lo, min(t1, t2)), min(hi, max(t1, t2))
        if lo > hi:
            return 0.0, 0.0
        return min(lo, 0.0), max(hi, 0.0)

    def span(self, area: AreaOfInterest, u: float, height: float) -> tuple[float, float]:
        lo, hi = self.cross_section(area, u)
        return max(-height / 2, lo), min(height / 2, hi)


def _spacing(scenario: Scenario) -> float:
    if not scenario.nodes:
        raise ValueError("sweep spacing needs at least one sensor node")
    w = 2.0 * min(n.radius for n in scenario.nodes)
    if w <= 0:
        raise ValueError("sweep spacing 2 * min radius must be > 0")
    return w


def strip_polyline(scenario: Scenario, area: AreaOfInterest, height: float) -> list[Point]:
    """Boustrophedon path: one transverse pass through the middle of each strip.

    Strips of width 2 * min radius tile the start-end line. The UAV goes
    from the start to the bottom of the first pass, alternates up/down
    passes joined by short legs, and finishes with a leg to the end.
    """
    if height < 0:
        raise ValueError("height must be >= 0")
    if height == 0:
        return [scenario.start, scenario.end]
    frame = _Frame(scenario)
    w = _spacing(scenario)
    n_strips = math.ceil(frame.length / w)
    pts = [scenario.start]
    for j in range(n_strips):
        u = min((j + 0.5) * w, frame.length)
        lo, hi = frame.span(area, u, height)
        first, second = (lo, hi) if j % 2 == 0 else (hi, lo)
        pts.append(frame.to_xy(u, first))
        pts.append(frame.to_xy(u, second))
    pts.append(scenario.end)
    return pts


def zigzag_polyline(scenario: Scenario, area: AreaOfInterest, height: float) -> list[Point]:
    """Sawtooth path whose parallel legs are 2 * min radius apart along the line.

    Vertices alternate between the lower and upper edge of the sweep band
    every min radius along the u-axis, so consecutive up-legs (and
    down-legs) are one strip width apart.
    """
    if height < 0:
        raise ValueError("height must be >= 0")
    if height == 0:
        return [scenario.start, scenario.end]
    frame = _Frame(scenario)
    step = _spacing(scenario) / 2.0
    n_steps = math.ceil(frame.length / step)
    pts = [scenario.start]
    for j in range(1, n_steps):
        u = j * step
        lo, hi = frame.span(area, u, height)
        pts.append(frame.to_xy(u, lo if j % 2 == 1 else hi))
    pts.append(scenario.end)
    return pts


_POLYLINES = {"strip": strip_polyline, "zigzag": zigzag_polyline}


def sweep_length(scenario: Scenario, area: AreaOfInterest, height: float, kind: str) -> float:
    return polyline_length(_POLYLINES[kind](scenario, area, height))


def strip_trajectory(scenario: Scenario, area: AreaOfInterest, height: float) -> Trajectory:
    return polyline_to_trajectory(scenario, strip_polyline(scenario, area, height))


def zigzag_trajectory(scenario: Scenario, area: AreaOfInterest, height: float) -> Trajectory:
    return polyline_to_trajectory(scenario, zigzag_polyline(scenario, area, height))


def tune_height(scenario: Scenario, area: AreaOfInterest, kind: str) -> tuple[float, Trajectory]:
    """Largest sweep height (to within 1 m) whose path fits in v_max * T.

    Path length grows monotonically with height, so plain bisection on
    [0, area diagonal] works.
    """
    if kind not in _POLYLINES:
        raise ValueError(f"unknown sweep kind {kind!r}")
    budget = scenario.budget
    lo, hi = 0.0, area.diagonal
    if sweep_length(scenario, area, hi, kind) <= budget:
        lo = hi
    else:
        while hi - lo > HEIGHT_TOL:
            mid = 0.5 * (lo + hi)
            if sweep_length(scenario, area, mid, kind) <= budget:
                lo = mid
            else:
                hi = mid
    return lo, polyline_to_trajectory(scenario, _POLYLINES[kind](scenario, area, lo))
