"""Sensor selection: the greedy insertion planner and an exhaustive oracle."""

from __future__ import annotations

import itertools
from typing import Iterable

from .model import Plan, Scenario, distance
from .tsp import TourInstance, order_sites
from .waypoints import DiskChainInstance, solve_disk_chain

DEFAULT_TOL = 1e-6
DEFAULT_MAX_ITERS = 10000


def _chain(scenario: Scenario, order: Iterable[int], tol: float, max_iters: int) -> Plan:
    order = tuple(order)
    disks = [(scenario.node(i).position, scenario.node(i).radius) for i in order]
    sol = solve_disk_chain(
        DiskChainInstance(scenario.start, scenario.end, disks), tol=tol, max_iters=max_iters
    )
    return Plan(order, sol.waypoints, sol.length, converged=sol.converged)


def plan_route(
    subset: Iterable[int],
    scenario: Scenario,
    tol: float = DEFAULT_TOL,
    max_iters: int = DEFAULT_MAX_ITERS,
) -> Plan:
    """Shortest-path heuristic for visiting every node in ``subset``.

    The order comes from the open-path TSP over disk centers; the
    waypoints are then placed optimally for that order.
    """
    subset = list(subset)
    if len(set(subset)) != len(subset):
        raise ValueError("subset repeats a node")
    sites = [(i, scenario.node(i).position) for i in subset]
    order = order_sites(TourInstance(scenario.start, scenario.end, sites))
    return _chain(scenario, order, tol, max_iters)


def index_order_distance(scenario: Scenario) -> float:
    """Length of start -> w_1 -> ... -> w_N -> end, an upper bound on any tour."""
    pts = [scenario.start, *(n.position for n in scenario.nodes), scenario.end]
    return sum(distance(pts[i - 1], pts[i]) for i in range(1, len(pts)))


def greedy_plan(
    scenario: Scenario, tol: float = DEFAULT_TOL, max_iters: int = DEFAULT_MAX_ITERS
) -> Plan:
    """Grow the visited set one node at a time.

    Each round tries every unvisited node, and keeps the one whose
    augmented route is shortest while still within v_max * T (ties go to
    the lower id). Stops when all nodes are in or no insertion fits.
    """
    budget = scenario.budget
    d_max = index_order_distance(scenario)
    chosen: list[int] = []
    best = Plan((), (), distance(scenario.start, scenario.end))
    calls = 0
    reason = "all nodes visited"
    all_ids = [n.id for n in scenario.nodes]
    while len(chosen) < len(all_ids):
        # reset to the index-order distance; a candidate must beat it to count
        d_min = d_max
        accepted = None
        for u in all_ids:
            if u in chosen:
                continue
            cand = plan_route(chosen + [u], scenario, tol, max_iters)
            calls += 1
            if cand.total_length <= budget and cand.total_length < d_min:
                d_min = cand.total_length
                accepted = (u, cand)
        if accepted is None:
            reason = "no feasible insertion"
            break
        chosen.append(accepted[0])
        best = accepted[1]
    return Plan(
        best.order,
        best.waypoints,
        best.total_length,
        converged=best.converged,
        info={"termination": reason, "route_calls": calls, "d_max": d_max},
    )


def exact_plan(
    scenario: Scenario,
    max_n: int = 8,
    tol: float = DEFAULT_TOL,
    max_iters: int = DEFAULT_MAX_ITERS,
) -> Plan:
    """Largest visitable subset by brute force over subsets and orders.

    Subsets are tried from largest to smallest; the first size with a
    feasible order wins, and among its feasible plans the shortest is
    returned. Exponential: only for small N.
    """
    n = len(scenario.nodes)
    if n > max_n:
        raise ValueError(f"exact_plan needs N <= {max_n}, got N = {n}")
    budget = scenario.budget
    ids = [node.id for node in scenario.nodes]
    evaluated = 0
    for k in range(n, 0, -1):
        best = None
        for subset in itertools.combinations(ids, k):
            for order in itertools.permutations(subset):
                cand = _chain(scenario, order, tol, max_iters)
                evaluated += 1
                if cand.total_length <= budget and (
                    best is None or cand.total_length < best.total_length
                ):
                    best = cand
        if best is not None:
            return Plan(
                best.order, best.waypoints, best.total_length,
                converged=best.converged, info={"orders_evaluated": evaluated},
            )
    return Plan((), (), distance(scenario.start, scenario.end), info={"orders_evaluated": evaluated})
