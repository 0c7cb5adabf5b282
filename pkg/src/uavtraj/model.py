"""Domain types, coverage semantics and trajectory conversions.

Lengths are meters, times seconds. A trajectory is a polyline flown at
constant speed; a plan is an ordered list of (node, waypoint) pairs from
which that polyline is built.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Sequence

import numpy as np

TOL_GEO = 1e-6
TOL_SPEED = 1e-9
# vertices closer than this are merged so vertex times stay strictly increasing
MERGE_TOL = 1e-9


class InfeasiblePlanError(ValueError):
    """Path longer than the UAV can fly within the horizon."""

    def __init__(self, length: float, budget: float):
        self.length = length
        self.budget = budget
        self.excess = length - budget
        super().__init__(
            f"path length {length:.6f} m exceeds budget {budget:.6f} m by {self.excess:.6f} m"
        )


class InvalidTrajectoryError(ValueError):
    pass


class Point(NamedTuple):
    x: float
    y: float


def as_point(p: Sequence[float]) -> Point:
    x, y = float(p[0]), float(p[1])
    if not (math.isfinite(x) and math.isfinite(y)):
        raise ValueError(f"non-finite coordinates: {p!r}")
    return Point(x, y)


def distance(a: Sequence[float], b: Sequence[float]) -> float:
    return math.hypot(b[0] - a[0], b[1] - a[1])


def polyline_length(points: Sequence[Sequence[float]]) -> float:
    return sum(distance(points[i - 1], points[i]) for i in range(1, len(points)))


@dataclass(frozen=True)
class SensorNode:
    id: int
    position: Point
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "position", as_point(self.position))
        object.__setattr__(self, "radius", float(self.radius))
        if not (self.radius >= 0 and math.isfinite(self.radius)):
            raise ValueError(f"node {self.id}: radius must be finite and >= 0")


@dataclass(frozen=True)
class EstimationParams:
    """Observation-noise variance, signal half-range and quantizer bits."""

    sigma2: float = 1.0
    W: float = 1.0
    S: int = 10

    def __post_init__(self):
        if self.sigma2 < 0:
            raise ValueError("sigma2 must be >= 0")
        if self.W <= 0:
            raise ValueError("W must be > 0")
        if int(self.S) != self.S or self.S < 1:
            raise ValueError("S must be an integer >= 1")


@dataclass(frozen=True)
class Scenario:
    nodes: tuple[SensorNode, ...]
    start: Point
    end: Point
    v_max: float
    horizon: float
    altitude: float = 100.0
    estimation: EstimationParams = field(default_factory=EstimationParams)
    seed: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(self.nodes))
        object.__setattr__(self, "start", as_point(self.start))
        object.__setattr__(self, "end", as_point(self.end))
        if not self.v_max > 0:
            raise ValueError("v_max must be > 0")
        if not self.horizon > 0:
            raise ValueError("horizon must be > 0")
        ids = [n.id for n in self.nodes]
        if ids != list(range(1, len(ids) + 1)):
            raise ValueError("node ids must be 1..N in order")
        if distance(self.start, self.end) > self.budget + TOL_GEO:
            raise ValueError(
                f"no feasible trajectory: |end - start| = {distance(self.start, self.end):.6f} m "
                f"> v_max * T = {self.budget:.6f} m"
            )

    @property
    def budget(self) -> float:
        """Longest path the UAV can fly, v_max * T."""
        return self.v_max * self.horizon

    @property
    def t_min(self) -> float:
        return distance(self.start, self.end) / self.v_max

    def node(self, node_id: int) -> SensorNode:
        if not 1 <= node_id <= len(self.nodes):
            raise KeyError(f"unknown node id {node_id}")
        return self.nodes[node_id - 1]

    def centers(self) -> np.ndarray:
        return np.array([n.position for n in self.nodes], dtype=float).reshape(-1, 2)

    def radii(self) -> np.ndarray:
        return np.array([n.radius for n in self.nodes], dtype=float)


@dataclass(frozen=True)
class Plan:
    order: tuple[int, ...]
    waypoints: tuple[Point, ...]
    total_length: float
    converged: bool = True
    info: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "order", tuple(int(i) for i in self.order))
        object.__setattr__(self, "waypoints", tuple(as_point(p) for p in self.waypoints))
        if len(self.order) != len(self.waypoints):
            raise ValueError("order and waypoints differ in length")
        if len(set(self.order)) != len(self.order):
            raise ValueError("order repeats a node")

    @property
    def K(self) -> int:
        return len(self.order)

    def path(self, scenario: Scenario) -> list[Point]:
        return [scenario.start, *self.waypoints, scenario.end]


def check_plan(scenario: Scenario, plan: Plan) -> None:
    """Raise ValueError unless every waypoint lies in its disk and the length adds up."""
    for node_id, q in zip(plan.order, plan.waypoints):
        node = scenario.node(node_id)
        gap = distance(q, node.position) - node.radius
        if gap > TOL_GEO:
            raise ValueError(f"waypoint for node {node_id} is {gap:.3g} m outside its disk")
    length = polyline_length(plan.path(scenario))
    if abs(length - plan.total_length) > TOL_GEO * max(1.0, len(plan.order)):
        raise ValueError(f"total_length {plan.total_length} != path length {length}")


@dataclass(frozen=True)
class Trajectory:
    """Time-stamped polyline vertices ``(t, Point)`` with straight legs between them."""

    vertices: tuple[tuple[float, Point], ...]

    @property
    def times(self) -> np.ndarray:
        return np.array([t for t, _ in self.vertices], dtype=float)

    @property
    def points(self) -> list[Point]:
        return [p for _, p in self.vertices]

    @property
    def length(self) -> float:
        return polyline_length(self.points)

    def position(self, t: float) -> Point:
        times = self.times
        if t <= times[0]:
            return self.vertices[0][1]
        if t >= times[-1]:
            return self.vertices[-1][1]
        i = int(np.searchsorted(times, t, side="right")) - 1
        (t0, p0), (t1, p1) = self.vertices[i], self.vertices[i + 1]
        s = (t - t0) / (t1 - t0)
        return Point(p0.x + s * (p1.x - p0.x), p0.y + s * (p1.y - p0.y))


def validate_trajectory(scenario: Scenario, traj: Trajectory) -> None:
    """Check endpoints, timing and the speed cap; raise InvalidTrajectoryError."""
    if len(traj.vertices) < 2:
        raise InvalidTrajectoryError("a trajectory needs at least two vertices")
    times = traj.times
    if abs(times[0]) > 1e-9 or abs(times[-1] - scenario.horizon) > 1e-9 * max(1.0, scenario.horizon):
        raise InvalidTrajectoryError("trajectory must run from t=0 to t=horizon")
    if np.any(np.diff(times) <= 0):
        raise InvalidTrajectoryError("vertex times must be strictly increasing")
    pts = traj.points
    if distance(pts[0], scenario.start) > TOL_GEO:
        raise InvalidTrajectoryError(f"trajectory starts at {pts[0]}, not {scenario.start}")
    if distance(pts[-1], scenario.end) > TOL_GEO:
        raise InvalidTrajectoryError(f"trajectory ends at {pts[-1]}, not {scenario.end}")
    # a path up to TOL_GEO over budget is accepted, which shows up as speed
    speed_tol = max(TOL_SPEED, TOL_GEO / scenario.horizon)
    for i in range(1, len(pts)):
        v = distance(pts[i - 1], pts[i]) / (times[i] - times[i - 1])
        if v > scenario.v_max + speed_tol:
            raise InvalidTrajectoryError(
                f"segment {i} speed {v:.9f} m/s exceeds v_max {scenario.v_max}"
            )


def polyline_to_trajectory(scenario: Scenario, points: Sequence[Sequence[float]]) -> Trajectory:
    """Fly ``points`` at constant speed so the last vertex is reached at the horizon."""
    raw = [as_point(p) for p in points]
    pts: list[Point] = [raw[0]]
    for p in raw[1:]:
        if distance(pts[-1], p) <= MERGE_TOL:
            if p is raw[-1] and len(pts) > 1:
                pts[-1] = p
            continue
        pts.append(p)
    length = polyline_length(pts)
    if length > scenario.budget + TOL_GEO:
        raise InfeasiblePlanError(length, scenario.budget)
    T = scenario.horizon
    if len(pts) < 2:
        p = pts[0]
        return Trajectory(((0.0, p), (T, p)))
    cum = np.concatenate([[0.0], np.cumsum([distance(pts[i - 1], pts[i]) for i in range(1, len(pts))])])
    times = cum / length * T
    times[-1] = T
    return Trajectory(tuple((float(t), p) for t, p in zip(times, pts)))


def plan_to_trajectory(scenario: Scenario, plan: Plan) -> Trajectory:
    return polyline_to_trajectory(scenario, plan.path(scenario))


def segment_distances(centers: np.ndarray, pts: np.ndarray) -> np.ndarray:
    """Distance from each center to the polyline ``pts``; shape (len(centers),)."""
    centers = np.asarray(centers, dtype=float).reshape(-1, 2)
    pts = np.asarray(pts, dtype=float).reshape(-1, 2)
    if len(pts) == 1:
        return np.hypot(*(centers - pts[0]).T)
    a = pts[:-1][None, :, :]
    d = (pts[1:] - pts[:-1])[None, :, :]
    c = centers[:, None, :]
    dd = np.sum(d * d, axis=2)
    with np.errstate(invalid="ignore", divide="ignore"):
        t = np.where(dd > 0, np.sum((c - a) * d, axis=2) / dd, 0.0)
    t = np.clip(t, 0.0, 1.0)
    proj = a + t[..., None] * d
    return np.min(np.hypot(*(c - proj).transpose(2, 0, 1)), axis=1)


@dataclass(frozen=True)
class VisitReport:
    visited: dict[int, bool]

    @property
    def count(self) -> int:
        return sum(self.visited.values())

    @property
    def ids(self) -> frozenset[int]:
        return frozenset(i for i, v in self.visited.items() if v)


def visit_report(scenario: Scenario, traj: Trajectory) -> VisitReport:
    """Which coverage disks the trajectory enters; touching the boundary counts."""
    validate_trajectory(scenario, traj)
    if not scenario.nodes:
        return VisitReport({})
    dist = segment_distances(scenario.centers(), traj.points)
    hit = dist <= scenario.radii() + TOL_GEO
    return VisitReport({n.id: bool(h) for n, h in zip(scenario.nodes, hit)})


def _first_entry(p0: Point, p1: Point, c: Point, r: float) -> float | None:
    """Smallest s in [0, 1] with p0 + s(p1 - p0) inside the disk, or None."""
    fx, fy = p0.x - c.x, p0.y - c.y
    if math.hypot(fx, fy) <= r:
        return 0.0
    dx, dy = p1.x - p0.x, p1.y - p0.y
    A = dx * dx + dy * dy
    if A == 0.0:
        return None
    # closest point on the line, then back off by the half chord; stable near tangency
    sc = -(dx * fx + dy * fy) / A
    h = math.hypot(fx + sc * dx, fy + sc * dy)
    if h <= r:
        s = sc - math.sqrt(r * r - h * h) / math.sqrt(A)
        if 0.0 <= s <= 1.0:
            return s
    s = min(max(sc, 0.0), 1.0)
    if math.hypot(fx + s * dx, fy + s * dy) <= r + TOL_GEO:
        return s
    return None


def polyline_reduce(scenario: Scenario, traj: Trajectory) -> Plan:
    """Replace a trajectory by straight legs between first-entry points.

    Each visited node contributes the point where the trajectory first
    enters its disk; nodes are ordered by that entry time (ties by id).
    The result is never longer than the input.
    """
    validate_trajectory(scenario, traj)
    verts = traj.vertices
    entries = []
    for node in scenario.nodes:
        for i in range(1, len(verts)):
            (t0, p0), (t1, p1) = verts[i - 1], verts[i]
            s = _first_entry(p0, p1, node.position, node.radius)
            if s is not None:
                q = Point(p0.x + s * (p1.x - p0.x), p0.y + s * (p1.y - p0.y))
                entries.append((t0 + s * (t1 - t0), node.id, q))
                break
    entries.sort(key=lambda e: (e[0], e[1]))
    order = tuple(e[1] for e in entries)
    waypoints = tuple(e[2] for e in entries)
    length = polyline_length([scenario.start, *waypoints, scenario.end])
    return Plan(order, waypoints, length)
