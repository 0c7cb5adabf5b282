"""Command-line front end: ``uavtraj gen|plan|sweep``."""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys

from .harness import (
    ALGORITHMS,
    EXACT_MAX_N,
    HORIZON_GRID,
    RADIUS_GRID,
    RADIUS_GRID_T,
    SweepSpec,
    bounding_area,
    generate_scenario,
    load_scenario,
    parse_grid,
    plan_file_dict,
    run_algorithm,
    run_sweep,
    scenario_to_dict,
)
from .benchmarks import AreaOfInterest
from .model import InfeasiblePlanError

SEED_ENV = "PLANNER_SEED_OVERRIDE"


class CLIError(Exception):
    pass


def _pair(text: str, sep: str = ",") -> tuple[float, float]:
    try:
        a, b = text.split(sep)
        return float(a), float(b)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected two numbers separated by {sep!r}, got {text!r}")


def _area(text: str) -> tuple[float, float]:
    return _pair(text.lower(), "x")


def _write_text(text: str, path: str | None) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    tmp = path + ".tmp"
    with open(tmp, "w") as f:
        f.write(text)
    os.replace(tmp, path)


def cmd_gen(args) -> int:
    seed = args.seed
    override = os.environ.get(SEED_ENV)
    if override is not None:
        try:
            seed = int(override)
        except ValueError:
            raise CLIError(f"{SEED_ENV} must be an integer, got {override!r}")
    w, h = args.area
    area = AreaOfInterest.centered(w, h)
    try:
        scenario = generate_scenario(
            seed, args.n, area, args.r, start=args.start, end=args.end,
            v_max=args.vmax, horizon=args.T, altitude=args.H,
        )
    except ValueError as exc:
        raise CLIError(str(exc))
    _write_text(json.dumps(scenario_to_dict(scenario, area), indent=2) + "\n", args.out)
    return 0


def _load(path: str):
    try:
        return load_scenario(path)
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        raise CLIError(f"cannot read scenario {path}: {exc}")


def cmd_plan(args) -> int:
    scenario, area = _load(args.scenario)
    if args.algo == "exact" and len(scenario.nodes) > EXACT_MAX_N:
        raise CLIError(f"exact planner needs N <= {EXACT_MAX_N}, scenario has N = {len(scenario.nodes)}")
    try:
        out = run_algorithm(args.algo, scenario, area)
    except (InfeasiblePlanError, ValueError) as exc:
        raise CLIError(str(exc))
    if args.out:
        _write_text(json.dumps(plan_file_dict(out.plan, out.trajectory), indent=2) + "\n", args.out)
    m = "undefined" if out.mse is None else f"{out.mse:.6f}"
    print(f"K={out.K} length={out.path_length:.6f} mse={m}")
    return 0


def cmd_sweep(args) -> int:
    scenario, area = _load(args.scenario)
    T_default = [scenario.horizon]
    r_default = sorted({n.radius for n in scenario.nodes}) or [0.0]
    if args.preset == "horizon":
        T_default = list(HORIZON_GRID)
    elif args.preset == "radius":
        T_default, r_default = [RADIUS_GRID_T], list(RADIUS_GRID)
    try:
        T_values = parse_grid(args.T_grid) if args.T_grid is not None else T_default
        r_values = parse_grid(args.r_grid) if args.r_grid is not None else r_default
    except ValueError as exc:
        raise CLIError(str(exc))
    algos = [a.strip() for a in args.algos.split(",") if a.strip()]
    try:
        spec = SweepSpec(
            algorithms=algos, T_values=T_values, r_values=r_values,
            seeds=(scenario.seed if scenario.seed is not None else 0,),
            scenario=scenario, area=area if area is not None else bounding_area(scenario),
        )
    except ValueError as exc:
        raise CLIError(str(exc))
    result = run_sweep(spec, jobs=args.jobs)
    _write_text(result.to_csv(timing=not args.no_timing), args.out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="uavtraj",
        description="Plan UAV trajectories that collect data from as many ground sensors as possible.",
    )
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate a random scenario (JSON)")
    g.add_argument("--seed", type=int, default=0,
                   help=f"PRNG seed (overridden by ${SEED_ENV} when set)")
    g.add_argument("--n", type=int, default=40, help="number of sensor nodes")
    g.add_argument("--area", type=_area, default=(4000.0, 4000.0),
                   help="area WxH in meters, centered on the origin")
    g.add_argument("--r", type=float, default=200.0, help="coverage radius of every node (m)")
    g.add_argument("--vmax", type=float, default=50.0, help="UAV speed cap (m/s)")
    g.add_argument("--T", type=float, default=400.0, help="flight horizon (s)")
    g.add_argument("--H", type=float, default=100.0, help="flight altitude (m), metadata only")
    g.add_argument("--start", type=_pair, default=(-2000.0, -2000.0), help="start point x,y")
    g.add_argument("--end", type=_pair, default=(2000.0, 2000.0), help="end point x,y")
    g.add_argument("--out", default=None, help="output file (default: stdout)")
    g.set_defaults(func=cmd_gen)

    pl = sub.add_parser("plan", help="plan one trajectory and print K, length and MSE")
    pl.add_argument("--scenario", required=True, help="scenario JSON file")
    pl.add_argument("--algo", choices=ALGORITHMS, default="greedy")
    pl.add_argument("--out", default=None, help="write plan/trajectory JSON here")
    pl.set_defaults(func=cmd_plan)

    sw = sub.add_parser("sweep", help="run planners over grids of T and r, write CSV")
    sw.add_argument("--scenario", required=True, help="scenario JSON file")
    sw.add_argument("--algos", default="greedy,strip,zigzag",
                    help="comma list from " + ",".join(ALGORITHMS))
    sw.add_argument("--T-grid", dest="T_grid", default=None,
                    help="horizons a:b:step or comma list (default: scenario T)")
    sw.add_argument("--r-grid", dest="r_grid", default=None,
                    help="radii a:b:step or comma list (default: scenario radius)")
    sw.add_argument("--preset", choices=("horizon", "radius"), default=None,
                    help="default grids: horizon = T in "
                    + ",".join(f"{t:g}" for t in HORIZON_GRID)
                    + "; radius = r in " + ",".join(f"{r:g}" for r in RADIUS_GRID)
                    + f" at T={RADIUS_GRID_T:g}; explicit grids override")
    sw.add_argument("--jobs", type=int, default=1, help="worker processes")
    sw.add_argument("--no-timing", action="store_true",
                    help="write wall_time as 0 so reruns are byte-identical")
    sw.add_argument("--out", default=None, help="CSV output file (default: stdout)")
    sw.set_defaults(func=cmd_sweep)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except CLIError as exc:
        print(f"uavtraj: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
