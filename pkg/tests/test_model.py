import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import make_scenario
from oracles import sampled_visits
from uavtraj.model import (
    TOL_GEO,
    InfeasiblePlanError,
    InvalidTrajectoryError,
    Plan,
    Point,
    Trajectory,
    check_plan,
    distance,
    plan_to_trajectory,
    polyline_reduce,
    polyline_to_trajectory,
    segment_distances,
    validate_trajectory,
    visit_report,
)


def straight(scenario):
    return polyline_to_trajectory(scenario, [scenario.start, scenario.end])


def test_distance_examples():
    assert distance((0, 0), (0, 0)) == 0
    assert distance((0, 0), (3, 4)) == 5
    assert distance((-2000, -2000), (2000, 2000)) == pytest.approx(4000 * math.sqrt(2), rel=1e-15)
    assert distance((-2000, -2000), (2000, 2000)) == pytest.approx(5656.854249, abs=1e-6)


@given(*[st.floats(-1e6, 1e6) for _ in range(6)])
def test_distance_is_a_metric(ax, ay, bx, by, cx, cy):
    a, b, c = (ax, ay), (bx, by), (cx, cy)
    assert distance(a, b) >= 0
    assert distance(a, b) == distance(b, a)
    assert distance(a, c) <= distance(a, b) + distance(b, c) + 1e-9


def test_non_finite_point_rejected():
    with pytest.raises(ValueError):
        make_scenario([(math.nan, 0.0, 1.0)])


def test_scenario_needs_a_feasible_straight_flight():
    with pytest.raises(ValueError, match="no feasible trajectory"):
        make_scenario([], start=(0, 0), end=(100, 0), v_max=1.0, horizon=50.0)


@pytest.mark.parametrize(
    "node, start, end, visited",
    [
        ((1.0, 0.0, 0.5), (0.0, 0.0), (2.0, 0.0), True),
        ((0.0, 2.0, 1.0), (-1.0, 0.0), (1.0, 0.0), False),
        ((0.0, 1.0, 1.0), (-1.0, 0.0), (1.0, 0.0), True),
    ],
    ids=["on-path", "too-far", "tangent"],
)
def test_visit_report_examples(node, start, end, visited):
    s = make_scenario([node], start=start, end=end, v_max=1.0, horizon=10.0)
    report = visit_report(s, straight(s))
    assert report.visited == {1: visited}
    assert report.count == int(visited)


def test_visit_report_rejects_bad_trajectories(line_scenario):
    s = line_scenario
    with pytest.raises(InvalidTrajectoryError, match="ends"):
        visit_report(s, Trajectory(((0.0, Point(0, 0)), (10.0, Point(1, 0)))))
    with pytest.raises(InvalidTrajectoryError, match="speed"):
        fast = Trajectory(((0.0, Point(0, 0)), (0.5, Point(2, 0)), (10.0, Point(2, 0))))
        visit_report(s, fast)
    with pytest.raises(InvalidTrajectoryError, match="horizon"):
        visit_report(s, Trajectory(((0.0, Point(0, 0)), (5.0, Point(2, 0)))))


def test_plan_to_trajectory_hover():
    s = make_scenario([], start=(0, 0), end=(0, 0), v_max=1.0, horizon=10.0)
    traj = plan_to_trajectory(s, Plan((), (), 0.0))
    assert traj.vertices == ((0.0, Point(0, 0)), (10.0, Point(0, 0)))
    validate_trajectory(s, traj)


def test_plan_to_trajectory_uniform_speed():
    s = make_scenario([(2.0, 1.0, 1.0)], start=(0, 0), end=(4, 0), v_max=50.0, horizon=100.0)
    traj = plan_to_trajectory(s, Plan((1,), ((2.0, 0.0),), 4.0))
    assert [t for t, _ in traj.vertices] == pytest.approx([0.0, 50.0, 100.0])
    assert traj.length / s.horizon == pytest.approx(0.04)


def test_plan_to_trajectory_at_exact_budget():
    s = make_scenario([(5.0, 5.0, 0.0)], start=(0, 0), end=(10, 0), v_max=1.0, horizon=2 * math.hypot(5, 5))
    traj = plan_to_trajectory(s, Plan((1,), ((5.0, 5.0),), 2 * math.hypot(5, 5)))
    validate_trajectory(s, traj)
    assert traj.length / s.horizon == pytest.approx(s.v_max)


def test_plan_to_trajectory_rejects_long_plan():
    s = make_scenario([(5.0, 5.0, 0.0)], start=(0, 0), end=(10, 0), v_max=1.0, horizon=12.0)
    with pytest.raises(InfeasiblePlanError) as err:
        plan_to_trajectory(s, Plan((1,), ((5.0, 5.0),), 2 * math.hypot(5, 5)))
    assert err.value.excess == pytest.approx(2 * math.hypot(5, 5) - 12.0)


def test_polyline_reduce_straight_line_keeps_length():
    s = make_scenario([(5.0, 1.0, 2.0)], start=(0, 0), end=(10, 0), horizon=100.0)
    plan = polyline_reduce(s, straight(s))
    assert plan.order == (1,)
    entry = 5.0 - math.sqrt(3.0)
    assert plan.waypoints[0] == pytest.approx((entry, 0.0))
    assert plan.total_length == pytest.approx(10.0)


def test_polyline_reduce_drops_detour():
    s = make_scenario([(1.0, 1.0, 0.5)], start=(0, 0), end=(10, 0), horizon=100.0)
    detour = polyline_to_trajectory(s, [(0, 0), (5, 5), (10, 0)])
    plan = polyline_reduce(s, detour)
    assert plan.order == (1,)
    assert plan.total_length < detour.length - 1.0
    reduced = plan_to_trajectory(s, plan)
    assert visit_report(s, reduced).ids == visit_report(s, detour).ids == {1}


def test_polyline_reduce_orders_by_first_entry():
    s = make_scenario([(8, 0, 0.5), (2, 0, 0.5), (5, 0, 0.5)], start=(0, 0), end=(10, 0))
    plan = polyline_reduce(s, straight(s))
    assert plan.order == (2, 3, 1)
    assert visit_report(s, plan_to_trajectory(s, plan)).count == 3


polyline_nodes = st.lists(
    st.tuples(st.floats(-50, 50), st.floats(-50, 50), st.floats(0, 15)), min_size=1, max_size=8
)
polyline_vertices = st.lists(st.tuples(st.floats(-50, 50), st.floats(-50, 50)), min_size=0, max_size=6)


@settings(max_examples=150, deadline=None)
@given(polyline_nodes, polyline_vertices)
def test_reduction_keeps_visits_and_never_lengthens(nodes, inner):
    pts = [(-50.0, 0.0), *inner, (50.0, 0.0)]
    length = sum(math.dist(pts[i - 1], pts[i]) for i in range(1, len(pts)))
    s = make_scenario(nodes, start=pts[0], end=pts[-1], v_max=1.0, horizon=max(length, 100.0) + 1.0)
    traj = polyline_to_trajectory(s, pts)
    before = visit_report(s, traj).ids
    plan = polyline_reduce(s, traj)
    check_plan(s, plan)
    assert set(plan.order) == before
    assert plan.total_length <= traj.length + TOL_GEO
    after = visit_report(s, plan_to_trajectory(s, plan)).ids
    assert before <= after


@settings(max_examples=60, deadline=None)
@given(polyline_nodes, polyline_vertices)
def test_every_plan_node_is_visited(nodes, inner):
    pts = [(-50.0, 0.0), *inner, (50.0, 0.0)]
    s = make_scenario(nodes, start=pts[0], end=pts[-1], v_max=1.0, horizon=1000.0)
    plan = polyline_reduce(s, polyline_to_trajectory(s, pts))
    report = visit_report(s, plan_to_trajectory(s, plan))
    assert all(report.visited[i] for i in plan.order)


def test_geometric_visits_agree_with_time_sampling(rng):
    dt = 0.005
    for _ in range(40):
        nodes = [(*rng.uniform(-50, 50, 2), float(rng.uniform(0.5, 10))) for _ in range(10)]
        inner = [tuple(rng.uniform(-50, 50, 2)) for _ in range(int(rng.integers(0, 5)))]
        pts = [(-50.0, 0.0), *inner, (50.0, 0.0)]
        s = make_scenario(nodes, start=pts[0], end=pts[-1], v_max=10.0, horizon=100.0)
        traj = polyline_to_trajectory(s, pts)
        geo = visit_report(s, traj)
        sampled = sampled_visits(s.centers(), s.radii(), traj, dt=dt)
        gaps = segment_distances(s.centers(), traj.points)
        half_step = traj.length / s.horizon * dt / 2
        for node, hit, gap in zip(s.nodes, sampled, gaps):
            if hit:
                assert geo.visited[node.id]
            elif geo.visited[node.id]:
                # sampling can only miss a chord shorter than one sample step
                assert gap >= math.sqrt(max(node.radius**2 - half_step**2, 0.0)) - TOL_GEO


def test_check_plan_flags_waypoint_outside_disk():
    s = make_scenario([(5.0, 5.0, 1.0)])
    with pytest.raises(ValueError, match="outside its disk"):
        check_plan(s, Plan((1,), ((5.0, 3.0),), math.dist((0, 0), (5, 3)) + math.dist((5, 3), (10, 0))))
