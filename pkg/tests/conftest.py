import numpy as np
import pytest

from rootedcover import MetricInstance, RootedTree, euclidean_instance, line_instance

# acceptance lines collected during the run, echoed in the terminal summary
ACCEPTANCE: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)


@pytest.fixture
def report():
    def add(criterion: int, ok: bool, detail: str):
        line = f"{'PASS' if ok else 'FAIL'} criterion {criterion}: {detail}"
        ACCEPTANCE.append(line)
        print(line)

    return add


@pytest.fixture
def line4():
    return line_instance([0, 1, 2, 3], [0, 3], k=2, epsilon=0.25)


def random_instance(rng, n, m, k, epsilon=0.25, integer=False):
    """Random points with randomly placed depots.

    ``integer`` switches to Manhattan distance on a small grid so every
    weight, and every tour length, is an exactly representable integer.
    """
    pts = rng.random((n, 2))
    depots = sorted(rng.choice(n, size=m, replace=False).tolist())
    if integer:
        grid = np.floor(pts * 20)
        w = np.abs(grid[:, None, :] - grid[None, :, :]).sum(axis=-1)
        return MetricInstance(w, depots, k, epsilon)
    return euclidean_instance(pts, depots, k, epsilon)


def random_small(rng, epsilon=0.25):
    n = int(rng.integers(4, 10))
    m = int(rng.integers(1, 4))
    k = int(rng.integers(m, 5))
    return random_instance(rng, n, m, k, epsilon)


def random_tree(rng, n, integer=False):
    """Random recursive tree on ``range(n)`` rooted at 0."""
    edges = []
    for v in range(1, n):
        p = int(rng.integers(0, v))
        w = float(rng.integers(1, 10)) if integer else float(rng.uniform(0.05, 1.0))
        edges.append((p, v, w))
    return RootedTree.from_edges(edges, root=0, vertices=range(n))
