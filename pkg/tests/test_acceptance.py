"""Acceptance gate: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines inline; they
are also repeated in the terminal summary.
"""

import functools
import itertools
import math
import time

import numpy as np
import pytest

from conftest import random_instance, random_tree
from oracles import min_rooted_forest_weight
from rootedcover import (
    RootedTree,
    build_rooted_spanning_forest,
    decompose_forest,
    exact_solve,
    exact_tsp_cycle,
    solve,
    split_tree,
    validate_cover,
)
from rootedcover.bench import geometric_instance, loglog_slope, per_unit_ratio, run_ladder, run_m_sweep
from rootedcover.planner import iteration_bound, prepare

EPSILON = 0.25
GUARANTEE = 5 + EPSILON


@functools.cache
def guarantee_runs():
    """The 200 seeded small instances, each solved by the planner and the oracle."""
    rng = np.random.default_rng(20240601)
    runs = []
    t0 = time.perf_counter()
    for _ in range(200):
        n = int(rng.integers(4, 10))
        m = int(rng.integers(1, 4))
        k = int(rng.integers(m, 5))
        inst = random_instance(rng, n, m, k, EPSILON)
        runs.append((inst, solve(inst), exact_solve(inst)))
    return runs, time.perf_counter() - t0


@functools.cache
def large_runs():
    runs = []
    for seed in range(20):
        m = (4, 6)[seed % 2]
        inst = geometric_instance(500, m, 20, EPSILON, seed)
        runs.append((inst, solve(inst)))
    return runs


def test_criterion_1_guarantee(report):
    runs, secs = guarantee_runs()
    worst = max(sol.objective / ex.lambda_star for _, sol, ex in runs)
    bad = sum(sol.objective > GUARANTEE * ex.lambda_star for _, sol, ex in runs)
    ok = bad == 0 and secs < 60
    report(1, ok, f"{len(runs)} instances, {bad} above {GUARANTEE}*lambda*, worst ratio {worst:.4f}, {secs:.1f}s (limit 60s)")
    assert ok


def test_criterion_2_splitting(report):
    rng = np.random.default_rng(7)
    cases = []
    for _ in range(1000):
        n = int(rng.integers(2, 61))
        tree = random_tree(rng, n)
        cases.append((tree, float(rng.uniform(tree.w_max, 2 * tree.weight))))
    # five unit spokes at lam = 2: every vertex-disjoint split has 3 pieces, the bound is 2
    cases.append((RootedTree.from_edges([(0, i, 1.0) for i in range(1, 6)], root=0), 2.0))

    count_bad = weight_bad = cover_bad = overlap = 0
    for tree, lam in cases:
        pieces = split_tree(tree, lam)
        count_bad += len(pieces) > max(math.floor(tree.weight / lam), 1)
        weight_bad += any(p.weight >= 2 * lam for p in pieces)
        cover_bad += set().union(*(p.vertices for p in pieces)) != tree.vertices
        overlap += sum(len(p.vertices) for p in pieces) != len(tree.vertices)
    ok = count_bad == weight_bad == cover_bad == overlap == 0
    report(2, ok, (
        f"{len(cases)} trees (1000 random + 5-spoke star): {count_bad} over the count bound, "
        f"{weight_bad} pieces >= 2*lambda, {cover_bad} with missing vertices, "
        f"{overlap} whose pieces share a vertex"
    ))
    assert ok


def test_criterion_3_forest_minimality(report):
    rng = np.random.default_rng(3)
    mismatches = 0
    for _ in range(100):
        n = int(rng.integers(2, 8))
        m = int(rng.integers(1, min(n, 3) + 1))
        inst = random_instance(rng, n, m, m)
        got = build_rooted_spanning_forest(inst).weight
        want = min_rooted_forest_weight(inst.w, inst.depots)
        mismatches += not math.isclose(got, want, rel_tol=1e-9, abs_tol=1e-12)
    report(3, mismatches == 0, f"100 instances with n <= 7, {mismatches} forests heavier than the exhaustive minimum")
    assert mismatches == 0


def test_criterion_4_feasible_at_lambda_star(report):
    runs, _ = guarantee_runs()
    missing = 0
    for inst, _, ex in runs:
        _, _, cands = prepare(inst)
        lam = ex.lambda_star
        fits = [len(decompose_forest(c, lam)) <= inst.k for c in cands if c.forest.w_max <= lam]
        missing += not any(fits)
    report(4, missing == 0, f"{len(runs)} instances, {missing} with no candidate at <= k trees for lambda = lambda*")
    assert missing == 0


def test_criterion_5_validity(report):
    small, _ = guarantee_runs()
    bad = []
    for inst, sol, _ in small:
        bad += validate_cover(sol.cover, inst)
    large = large_runs()
    for inst, sol in large:
        bad += validate_cover(sol.cover, inst)
    total = len(small) + len(large)
    report(5, not bad, f"{total} covers checked ({len(large)} with n = 500), {len(bad)} violations")
    assert not bad


def test_criterion_6_iteration_bound(report):
    small, _ = guarantee_runs()
    pairs = [(inst, sol) for inst, sol, _ in small] + large_runs()
    over = checked = 0
    for inst, sol in pairs:
        _, _, cands = prepare(inst)
        for cand, trace in zip(cands, sol.traces):
            bound = iteration_bound(inst, cand.forest.w_max)
            if bound is None:
                continue
            checked += 1
            over += len(trace) > bound
    report(6, over == 0, f"{checked} candidate searches, {over} above the iteration bound")
    assert over == 0


@pytest.mark.slow
def test_criterion_7_scaling(report):
    t0 = time.perf_counter()
    ladder = run_ladder((50, 100, 200, 400, 800), m=3, repeats=3)
    slope = loglog_slope([r.n for r in ladder], [r.seconds for r in ladder])
    sweep = run_m_sweep((1, 2, 3, 4, 5), n=100, k=10, repeats=5)
    ratio = per_unit_ratio(sweep)
    secs = time.perf_counter() - t0
    ok = slope <= 2.5 and 1.5 <= ratio <= 3.0 and secs < 600
    report(7, ok, f"time-vs-n slope {slope:.2f} (<= 2.5), per-unit-m ratio {ratio:.2f} (in [1.5, 3.0]), bench {secs:.1f}s")
    assert ok


def test_criterion_8_oracle_consistency(report):
    rng = np.random.default_rng(8)
    disagree = subsets = 0
    for _ in range(50):
        inst = random_instance(rng, 7, 1, 1, integer=True)
        for r in range(1, 8):
            for sub in itertools.combinations(range(7), r):
                subsets += 1
                a = exact_tsp_cycle(sub, sub[0], inst, method="dp").weight
                b = exact_tsp_cycle(sub, sub[0], inst, method="permutation").weight
                disagree += a != b
    rises = 0
    for _ in range(20):
        inst = random_instance(rng, 8, 2, 2)
        vals = [exact_solve(inst.with_params(k=k)).lambda_star for k in range(2, 8)]
        rises += any(b > a for a, b in zip(vals, vals[1:]))
    ok = disagree == 0 and rises == 0
    report(8, ok, f"{subsets} subsets, {disagree} DP/permutation disagreements; {rises} of 20 instances where lambda* rose with k")
    assert ok
