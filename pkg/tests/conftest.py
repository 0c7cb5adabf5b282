import math

import numpy as np
import pytest

from uavtraj.model import EstimationParams, Point, Scenario, SensorNode

# one "PASS/FAIL criterion N: ..." line per acceptance criterion, shown at the end of the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)


def make_scenario(nodes, start=(0.0, 0.0), end=(10.0, 0.0), v_max=1.0, horizon=100.0, **kw):
    """Build a scenario from (x, y, r) triples; ids are assigned 1..N."""
    return Scenario(
        tuple(SensorNode(i + 1, Point(x, y), r) for i, (x, y, r) in enumerate(nodes)),
        start, end, v_max, horizon, **kw,
    )


def random_scenario(rng, n, *, size=1000.0, r_range=(0.0, 150.0), slack=(1.0, 2.0)):
    """Small random instance with a horizon between T_min and a few times it."""
    start = tuple(rng.uniform(0, size, 2))
    end = tuple(rng.uniform(0, size, 2))
    nodes = [(*rng.uniform(0, size, 2), float(rng.uniform(*r_range))) for _ in range(n)]
    v_max = 10.0
    direct = math.dist(start, end)
    horizon = max(direct, 1.0) * float(rng.uniform(*slack)) / v_max
    return make_scenario(nodes, start, end, v_max, horizon)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def line_scenario():
    return make_scenario([(1.0, 0.0, 0.5)], start=(0.0, 0.0), end=(2.0, 0.0), v_max=1.0, horizon=10.0)


@pytest.fixture
def estimation():
    return EstimationParams(sigma2=1.0, W=1.0, S=2)


def random_chain(rng, k_max=3, size=1000.0, r_max=300.0):
    """Random start/end and 1..k_max disks; about one radius in thirteen is exactly 0."""
    k = int(rng.integers(1, k_max + 1))
    start = tuple(rng.uniform(0, size, 2))
    end = tuple(rng.uniform(0, size, 2))
    disks = []
    for _ in range(k):
        c = tuple(rng.uniform(0, size, 2))
        r = float(rng.uniform(0, r_max))
        if rng.random() < 0.075:
            r = 0.0
        disks.append((c, r))
    return start, end, disks
