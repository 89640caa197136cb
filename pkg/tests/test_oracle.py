import itertools

import numpy as np
import pytest

from conftest import random_instance
from oracles import brute_lambda_star, tour_cost
from rootedcover import (
    InstanceTooLarge,
    exact_solve,
    exact_tsp_cycle,
    line_instance,
    validate_cover,
)


def test_line4(line4):
    sol = exact_solve(line4)
    assert sol.lambda_star == 2.0
    assert [c.route for c in sol.cover] == [(0, 1, 0), (3, 2, 3)]


def test_all_depots():
    inst = line_instance([0, 4, 9], [0, 1, 2], k=3)
    sol = exact_solve(inst)
    assert sol.lambda_star == 0 and [c.route for c in sol.cover] == [(0,), (1,), (2,)]


def test_single_robot_is_tsp():
    rng = np.random.default_rng(2)
    inst = random_instance(rng, 7, 1, 1)
    d = inst.depots[0]
    want = tour_cost(inst.w, d, [v for v in range(7) if v != d])
    assert exact_solve(inst).lambda_star == pytest.approx(want, rel=1e-12)


def test_line_tsp():
    inst = line_instance([0, 1, 2], [0], k=1)
    c = exact_tsp_cycle({0, 1, 2}, 0, inst)
    assert c.weight == 4.0 and c.route in ((0, 1, 2, 0), (0, 2, 1, 0))


def test_degenerate_tsp(line4):
    assert exact_tsp_cycle({3}, 3, line4).route == (3,)
    c = exact_tsp_cycle({3, 1}, 3, line4)
    assert c.route == (3, 1, 3) and c.weight == 4.0


@pytest.mark.parametrize("seed", range(10))
def test_dp_matches_permutation(seed):
    rng = np.random.default_rng(seed)
    inst = random_instance(rng, 7, 1, 1, integer=True)
    for r in range(1, 8):
        for sub in itertools.combinations(range(7), r):
            root = sub[0]
            a = exact_tsp_cycle(sub, root, inst, method="dp")
            b = exact_tsp_cycle(sub, root, inst, method="permutation")
            assert a.weight == b.weight


@pytest.mark.parametrize("seed", range(25))
def test_matches_plain_enumeration(seed):
    rng = np.random.default_rng(500 + seed)
    n = int(rng.integers(2, 7))
    m = int(rng.integers(1, min(n, 3) + 1))
    k = int(rng.integers(m, 5))
    inst = random_instance(rng, n, m, k)
    sol = exact_solve(inst)
    assert sol.lambda_star == pytest.approx(brute_lambda_star(inst.w, list(inst.depots), k), rel=1e-12)
    assert validate_cover(sol.cover, inst, strict=True) == []


@pytest.mark.parametrize("seed", range(10))
def test_monotone_in_k(seed):
    rng = np.random.default_rng(seed)
    inst = random_instance(rng, 8, 2, 2)
    vals = [exact_solve(inst.with_params(k=k)).lambda_star for k in range(2, 9)]
    assert all(b <= a for a, b in zip(vals, vals[1:]))
    # more robots than vertices changes nothing
    assert exact_solve(inst.with_params(k=20)).lambda_star == vals[-1]


@pytest.mark.parametrize("seed", range(10))
def test_relaxed_never_worse(seed):
    rng = np.random.default_rng(seed)
    inst = random_instance(rng, 7, 2, 3)
    relaxed = exact_solve(inst, relaxed=True)
    assert relaxed.lambda_star <= exact_solve(inst).lambda_star + 1e-12
    assert validate_cover(relaxed.cover, inst) == []


def test_guard():
    rng = np.random.default_rng(0)
    with pytest.raises(InstanceTooLarge):
        exact_solve(random_instance(rng, 20, 2, 3))
    with pytest.raises(InstanceTooLarge):
        exact_tsp_cycle(range(11), 0, random_instance(rng, 11, 1, 1))
