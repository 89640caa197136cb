import math

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from rootedcover import (
    MetricInstance,
    RootedTree,
    decompose_forest,
    euclidean_instance,
    solve,
    split_tree,
    validate_cover,
)
from rootedcover.cyclegen import cover_from_forest
from rootedcover.planner import prepare


@st.composite
def trees(draw, max_n=25):
    n = draw(st.integers(1, max_n))
    edges = []
    for v in range(1, n):
        p = draw(st.integers(0, v - 1))
        w = draw(st.floats(0.0, 10.0, allow_nan=False))
        edges.append((p, v, w))
    return RootedTree.from_edges(edges, root=0, vertices=range(n))


@st.composite
def instances(draw, max_n=12):
    n = draw(st.integers(1, max_n))
    coords = draw(st.lists(st.tuples(st.integers(0, 50), st.integers(0, 50)), min_size=n, max_size=n))
    m = draw(st.integers(1, n))
    depots = draw(st.permutations(range(n)))[:m]
    k = draw(st.integers(m, m + 4))
    return euclidean_instance(np.array(coords, float), sorted(depots), k)


@settings(max_examples=300, deadline=None)
@given(trees(), st.floats(0.0, 3.0))
def test_split_guarantees(tree, frac):
    lam = tree.w_max + frac * max(tree.weight, 1e-3)
    if lam <= 0:
        lam = 1.0
    pieces = split_tree(tree, lam)
    assert len(pieces) <= max(math.floor(tree.weight / lam), 1)
    assert all(p.weight < 2 * lam for p in pieces)
    assert set().union(*(p.vertices for p in pieces)) == tree.vertices
    edges = [e[:2] for p in pieces for e in p.edges]
    assert len(edges) == len(set(edges))
    assert set(edges) <= {e[:2] for e in tree.edges}


@settings(max_examples=80, deadline=None)
@given(instances())
def test_solution_is_valid(inst):
    sol = solve(inst)
    assert validate_cover(sol.cover, inst) == []
    assert sol.objective == sol.cover.max_weight


@settings(max_examples=60, deadline=None)
@given(instances(max_n=10), st.floats(0.0, 4.0))
def test_cycle_weight_at_most_twice_tree(inst, frac):
    _, _, cands = prepare(inst)
    for cand in cands:
        lam = cand.forest.w_max * (1 + frac) or 1.0
        pieces = decompose_forest(cand, lam)
        cover = cover_from_forest(pieces, inst)
        assert cover.vertices == frozenset(range(inst.n))
        for c in cover:
            assert c.weight <= 4 * lam + 2 * inst.w_max + 1e-9


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6), st.integers(0, 3))
def test_zero_matrix(n, extra):
    inst = MetricInstance(np.zeros((n, n)), (0,), 1 + extra)
    assert solve(inst).objective == 0
