import numpy as np
import pytest

from bhrank.graph import WeightBounds, build_graph

# arcs of the six-node trust network, 1-based as drawn
TOY_ARCS = [(2, 1, 1), (2, 3, 1), (3, 2, 9), (3, 6, 9), (4, 1, 1), (4, 5, 1), (5, 4, 9), (5, 6, 9)]


def pytest_addoption(parser):
    parser.addoption("--runslow", action="store_true", default=False, help="run slow scaling checks")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--runslow"):
        return
    skip = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip)


def make_toy(bounds=WeightBounds.uniform(0, 10)):
    return build_graph(6, [(s - 1, t - 1, w) for s, t, w in TOY_ARCS], bounds)


@pytest.fixture
def toy():
    return make_toy()


def random_graph(rng, n, density=0.3, per_node=False, at_high=False, integer=False, sinks=True):
    """Random bounded digraph; some nodes are forced to be sinks when ``sinks``."""
    if per_node:
        lo = rng.uniform(0, 2, size=n).round(3)
        hi = lo + rng.uniform(0.5, 5, size=n).round(3)
        bounds = WeightBounds.per_node(list(zip(lo, hi)))
    else:
        lo, hi = np.zeros(n), np.full(n, 10.0)
        bounds = WeightBounds.uniform(0, 10)
    sink = rng.random(n) < 0.15 if sinks else np.zeros(n, bool)
    arcs = []
    for i in range(n):
        if sink[i]:
            continue
        for j in range(n):
            if i != j and rng.random() < density:
                if at_high:
                    w = hi[i]
                elif integer:
                    w = float(rng.integers(lo[i], hi[i] + 1)) if not per_node else hi[i]
                else:
                    w = rng.uniform(lo[i], hi[i])
                arcs.append((i, j, w))
    return build_graph(n, arcs, bounds)


# one line per acceptance criterion, echoed at the end of the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
