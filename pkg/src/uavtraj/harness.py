"""Scenario generation, file formats and experiment sweeps."""

from __future__ import annotations

import csv
import io
import json
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, replace
import numpy as np

from .benchmarks import AreaOfInterest, tune_height
from .estimation import mse
from .greedy import exact_plan, greedy_plan
from .model import (
    EstimationParams,
    Plan,
    Point,
    Scenario,
    SensorNode,
    Trajectory,
    check_plan,
    plan_to_trajectory,
    polyline_reduce,
    validate_trajectory,
    visit_report,
)

log = logging.getLogger(__name__)

ALGORITHMS = ("greedy", "strip", "zigzag", "exact")
EXACT_MAX_N = 8
CSV_HEADER = ["algorithm", "seed", "T", "r", "K", "path_length", "mse", "wall_time"]

DEFAULT_AREA = AreaOfInterest(-2000.0, -2000.0, 2000.0, 2000.0)

# preset grids: K versus horizon at r = 200 m, and K versus radius at T = 200 s
HORIZON_GRID = (120.0, 200.0, 300.0, 400.0, 500.0, 600.0)
RADIUS_GRID = (50.0, 100.0, 200.0, 300.0, 400.0)
RADIUS_GRID_T = 200.0
SHIPPED_SEEDS = (0, 1, 2, 3, 4)


def generate_scenario(
    seed: int,
    n: int,
    area: AreaOfInterest,
    r: float,
    *,
    start=(-2000.0, -2000.0),
    end=(2000.0, 2000.0),
    v_max: float = 50.0,
    horizon: float = 400.0,
    altitude: float = 100.0,
    estimation: EstimationParams | None = None,
) -> Scenario:
    """``n`` sensors placed uniformly at random in ``area``, all with radius ``r``.

    Positions come from numpy's Philox-4x64 counter-based generator keyed
    by ``seed``: x and y for node i are draws 2i and 2i + 1 of
    ``Generator.random``, scaled to the area.
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    rng = np.random.Generator(np.random.Philox(seed))
    u = rng.random((n, 2))
    xs = area.xmin + u[:, 0] * (area.xmax - area.xmin)
    ys = area.ymin + u[:, 1] * (area.ymax - area.ymin)
    nodes = tuple(
        SensorNode(i + 1, Point(float(x), float(y)), r) for i, (x, y) in enumerate(zip(xs, ys))
    )
    return Scenario(
        nodes, start, end, v_max, horizon, altitude,
        estimation if estimation is not None else EstimationParams(), seed=seed,
    )


def with_horizon(scenario: Scenario, horizon: float) -> Scenario:
    return replace(scenario, horizon=float(horizon))


def with_radius(scenario: Scenario, r: float) -> Scenario:
    nodes = tuple(SensorNode(n.id, n.position, r) for n in scenario.nodes)
    return replace(scenario, nodes=nodes)


def bounding_area(scenario: Scenario) -> AreaOfInterest:
    pts = [scenario.start, scenario.end, *(n.position for n in scenario.nodes)]
    xs = [p.x for p in pts]
    ys = [p.y for p in pts]
    pad = 1.0 if max(xs) == min(xs) or max(ys) == min(ys) else 0.0
    return AreaOfInterest(min(xs) - pad, min(ys) - pad, max(xs) + pad, max(ys) + pad)


# -- files -------------------------------------------------------------------


def scenario_to_dict(scenario: Scenario, area: AreaOfInterest | None = None) -> dict:
    out = {
        "nodes": [
            {"id": n.id, "x": n.position.x, "y": n.position.y, "r": n.radius}
            for n in scenario.nodes
        ],
        "start": list(scenario.start),
        "end": list(scenario.end),
        "v_max": scenario.v_max,
        "T": scenario.horizon,
        "H": scenario.altitude,
        "estimation": asdict(scenario.estimation),
    }
    if scenario.seed is not None:
        out["seed"] = scenario.seed
    if area is not None:
        out["area"] = [area.xmin, area.ymin, area.xmax, area.ymax]
    return out


def scenario_from_dict(data: dict) -> tuple[Scenario, AreaOfInterest | None]:
    """Parse a scenario object; returns the scenario and its optional area."""
    try:
        nodes = tuple(
            SensorNode(int(d["id"]), Point(float(d["x"]), float(d["y"])), float(d["r"]))
            for d in sorted(data["nodes"], key=lambda d: int(d["id"]))
        )
        est = data.get("estimation", {})
        scenario = Scenario(
            nodes,
            tuple(data["start"]),
            tuple(data["end"]),
            float(data["v_max"]),
            float(data["T"]),
            float(data.get("H", 100.0)),
            EstimationParams(float(est.get("sigma2", 1.0)), float(est.get("W", 1.0)), int(est.get("S", 10))),
            seed=data.get("seed"),
        )
    except KeyError as exc:
        raise ValueError(f"scenario file is missing field {exc}") from None
    area = AreaOfInterest(*data["area"]) if "area" in data else None
    return scenario, area


def save_scenario(scenario: Scenario, path, area: AreaOfInterest | None = None) -> None:
    with open(path, "w") as f:
        json.dump(scenario_to_dict(scenario, area), f, indent=2)
        f.write("\n")


def load_scenario(path) -> tuple[Scenario, AreaOfInterest | None]:
    with open(path) as f:
        return scenario_from_dict(json.load(f))


def plan_file_dict(plan: Plan, traj: Trajectory) -> dict:
    return {
        "order": list(plan.order),
        "waypoints": [list(p) for p in plan.waypoints],
        "vertices": [[t, p.x, p.y] for t, p in traj.vertices],
        "total_length": traj.length,
    }


def plan_file_parse(data: dict) -> tuple[Plan, Trajectory]:
    plan = Plan(data["order"], [tuple(p) for p in data["waypoints"]], float(data["total_length"]))
    traj = Trajectory(tuple((float(t), Point(float(x), float(y))) for t, x, y in data["vertices"]))
    return plan, traj


# -- running planners ----------------------------------------------------------


@dataclass(frozen=True)
class RunOutcome:
    algorithm: str
    plan: Plan
    trajectory: Trajectory
    K: int
    visited: frozenset
    path_length: float
    mse: float | None
    wall_time: float
    height: float | None = None


def run_algorithm(algorithm: str, scenario: Scenario, area: AreaOfInterest | None = None) -> RunOutcome:
    """Plan with one algorithm and evaluate the result on the validated trajectory.

    For the sweep baselines the plan is recovered from the trajectory
    (first-entry points, in time order).
    """
    t0 = time.perf_counter()
    height = None
    if algorithm in ("greedy", "exact"):
        if algorithm == "exact" and len(scenario.nodes) > EXACT_MAX_N:
            raise ValueError(f"exact planner needs N <= {EXACT_MAX_N}, got {len(scenario.nodes)}")
        plan = greedy_plan(scenario) if algorithm == "greedy" else exact_plan(scenario, EXACT_MAX_N)
        check_plan(scenario, plan)
        traj = plan_to_trajectory(scenario, plan)
    elif algorithm in ("strip", "zigzag"):
        area = area if area is not None else bounding_area(scenario)
        height, traj = tune_height(scenario, area, algorithm)
        plan = polyline_reduce(scenario, traj)
    else:
        raise ValueError(f"unknown algorithm {algorithm!r}")
    elapsed = time.perf_counter() - t0
    validate_trajectory(scenario, traj)
    report = visit_report(scenario, traj)
    K = report.count
    return RunOutcome(
        algorithm, plan, traj, K, report.ids, traj.length,
        mse(scenario.estimation, K) if K >= 1 else None, elapsed, height,
    )


# -- sweeps ---------------------------------------------------------------------


@dataclass(frozen=True)
class ScenarioTemplate:
    """Everything but the seed, horizon and radius needed to generate a scenario."""

    n: int = 40
    area: AreaOfInterest = DEFAULT_AREA
    start: tuple = (-2000.0, -2000.0)
    end: tuple = (2000.0, 2000.0)
    v_max: float = 50.0
    altitude: float = 100.0
    estimation: EstimationParams = field(default_factory=EstimationParams)


@dataclass(frozen=True)
class SweepSpec:
    algorithms: tuple[str, ...]
    T_values: tuple[float, ...]
    r_values: tuple[float, ...]
    seeds: tuple[int, ...] = (0,)
    template: ScenarioTemplate = field(default_factory=ScenarioTemplate)
    scenario: Scenario | None = None
    area: AreaOfInterest | None = None

    def __post_init__(self):
        for name in ("algorithms", "T_values", "r_values", "seeds"):
            object.__setattr__(self, name, tuple(getattr(self, name)))
            if not getattr(self, name):
                raise ValueError(f"{name} must not be empty")
        bad = set(self.algorithms) - set(ALGORITHMS)
        if bad:
            raise ValueError(f"unknown algorithms {sorted(bad)}")
        n = len(self.scenario.nodes) if self.scenario is not None else self.template.n
        if "exact" in self.algorithms and n > EXACT_MAX_N:
            raise ValueError(f"exact planner needs N <= {EXACT_MAX_N}, got {n}")

    def cells(self):
        """(algorithm, seed, T, r) in output order."""
        for algorithm in self.algorithms:
            for seed in self.seeds:
                for T in self.T_values:
                    for r in self.r_values:
                        yield algorithm, seed, T, r

    def build(self, seed: int, T: float, r: float) -> tuple[Scenario, AreaOfInterest]:
        if self.scenario is not None:
            base = with_radius(with_horizon(self.scenario, T), r)
            return base, self.area if self.area is not None else bounding_area(base)
        t = self.template
        s = generate_scenario(
            seed, t.n, t.area, r, start=t.start, end=t.end, v_max=t.v_max,
            horizon=T, altitude=t.altitude, estimation=t.estimation,
        )
        return s, self.area if self.area is not None else t.area


@dataclass(frozen=True)
class SweepRow:
    algorithm: str
    seed: int
    T: float
    r: float
    K: int | None
    path_length: float | None
    mse: float | None
    wall_time: float
    error: str | None = None

    def csv_fields(self, timing: bool = True) -> list[str]:
        if self.error is not None:
            k = length = ""
            m = "failed"
        else:
            k = str(self.K)
            length = f"{self.path_length:.6f}"
            m = "undefined" if self.mse is None else f"{self.mse:.6f}"
        wall = self.wall_time if timing else 0.0
        return [self.algorithm, str(self.seed), f"{self.T:.6f}", f"{self.r:.6f}", k, length, m, f"{wall:.6f}"]


@dataclass(frozen=True)
class SweepResult:
    rows: tuple[SweepRow, ...]

    def to_csv(self, timing: bool = True) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for row in self.rows:
            w.writerow(row.csv_fields(timing))
        return buf.getvalue()

    def table(self) -> dict:
        """{(algorithm, seed, T, r): K} for successful rows."""
        return {(r.algorithm, r.seed, r.T, r.r): r.K for r in self.rows if r.error is None}


def run_cell(spec: SweepSpec, algorithm: str, seed: int, T: float, r: float) -> SweepRow:
    try:
        scenario, area = spec.build(seed, T, r)
        out = run_algorithm(algorithm, scenario, area)
    except ValueError as exc:
        log.warning("sweep cell %s seed=%s T=%s r=%s failed: %s", algorithm, seed, T, r, exc)
        return SweepRow(algorithm, seed, float(T), float(r), None, None, None, 0.0, str(exc))
    return SweepRow(algorithm, seed, float(T), float(r), out.K, out.path_length, out.mse, out.wall_time)


def _run_cell_args(args):
    return run_cell(*args)


def run_sweep(spec: SweepSpec, jobs: int = 1) -> SweepResult:
    """One row per (algorithm, seed, T, r), in that nesting order.

    With ``jobs > 1`` cells run in worker processes; row order does not
    depend on completion order.
    """
    cells = list(spec.cells())
    if jobs > 1 and len(cells) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_run_cell_args, [(spec, *c) for c in cells]))
    else:
        rows = [run_cell(spec, *c) for c in cells]
    return SweepResult(tuple(rows))


def parse_grid(text: str) -> list[float]:
    """``a:b:step`` (inclusive of b), a comma list, or a single value."""
    text = text.strip()
    if not text:
        raise ValueError("empty grid")
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"grid must look like a:b:step, got {text!r}")
        a, b, step = (float(p) for p in parts)
        if step <= 0 or b < a:
            raise ValueError(f"empty grid {text!r}")
        n = int(np.floor((b - a) / step + 1e-9)) + 1
        return [a + i * step for i in range(n)]
    values = [float(p) for p in text.split(",") if p.strip()]
    if not values:
        raise ValueError("empty grid")
    return values

