import json

import numpy as np
import pytest

from conftest import random_instance
from rootedcover import (
    Cycle,
    CycleCover,
    RootedTree,
    build_rooted_spanning_forest,
    cover_from_forest,
    decompose_forest,
    line_instance,
)
from rootedcover.cyclegen import (
    attach_depots,
    cover_from_document,
    cover_to_dot,
    cover_to_json,
    euler_shortcut,
    tree_to_cycle,
)
from rootedcover.forest import build_connector_edges, enumerate_candidates


def test_attach_tie_goes_to_lowest_depot(line4):
    piece = RootedTree.from_edges([(1, 2, 1.0)])
    (out,) = attach_depots([piece], line4)
    assert out.root == 0
    assert (0, 1, 1.0) in out.edges and out.weight == 2.0


def test_attach_keeps_depot_trees(line4):
    t = RootedTree.from_edges([(2, 3, 1.0)], root=3)
    assert attach_depots([t], line4) == [t]


def test_attach_reroots_at_lowest_depot(line4):
    t = RootedTree.from_edges([(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0)], root=3)
    (out,) = attach_depots([t], line4)
    assert out.root == 0


def test_attach_singleton(line4):
    (out,) = attach_depots([RootedTree.singleton(2)], line4)
    assert out.root == 3 and out.edges == ((2, 3, 1.0),)


def test_path_cycle():
    inst = line_instance([0, 1, 2], [0], k=1)
    t = RootedTree.from_edges([(0, 1, 1.0), (1, 2, 1.0)], root=0)
    c = tree_to_cycle(t, inst)
    assert c.route == (0, 1, 2, 0) and c.weight == 4.0 == 2 * t.weight


def test_degenerate_cycles(line4):
    assert tree_to_cycle(RootedTree.singleton(3, 3), line4) == Cycle(3, (3,), 0.0)
    c = tree_to_cycle(RootedTree.from_edges([(2, 3, 1.0)], root=3), line4)
    assert c.route == (3, 2, 3) and c.weight == 2.0


def test_euler_children_ascending():
    t = RootedTree.from_edges([(0, 3, 1), (0, 1, 1), (1, 2, 1), (0, 4, 1)], root=0)
    assert euler_shortcut(t) == [0, 1, 2, 3, 4]


def test_line4_fstar_cover(line4):
    cover = cover_from_forest(build_rooted_spanning_forest(line4), line4)
    assert [c.route for c in cover] == [(0, 1, 0), (3, 2, 3)]
    assert cover.max_weight == 2.0


def test_line4_whole_tree_cycle(line4):
    fstar = build_rooted_spanning_forest(line4)
    whole = list(enumerate_candidates(fstar, build_connector_edges(line4, fstar)))[1]
    cover = cover_from_forest(decompose_forest(whole, 2.0), line4)
    assert [c.route for c in cover] == [(0, 1, 2, 3, 0)]
    assert cover.max_weight == 6.0


def test_all_depot_cover():
    inst = line_instance([0, 2, 7], [0, 1, 2], k=3)
    cover = cover_from_forest(build_rooted_spanning_forest(inst), inst)
    assert [c.route for c in cover] == [(0,), (1,), (2,)]
    assert cover.max_weight == 0


def test_empty_cover_weight():
    assert CycleCover(()).max_weight == 0.0


@pytest.mark.parametrize("seed", range(30))
def test_cycles_share_only_depots(seed):
    rng = np.random.default_rng(seed)
    inst = random_instance(rng, int(rng.integers(5, 40)), int(rng.integers(1, 4)), 6)
    fstar = build_rooted_spanning_forest(inst)
    for cand in enumerate_candidates(fstar, build_connector_edges(inst, fstar)):
        lam = float(rng.uniform(cand.forest.w_max, 2 * cand.forest.weight + 1e-9))
        lam = max(lam, cand.forest.w_max, 1e-9)
        pieces = decompose_forest(cand, lam)
        attached = attach_depots(pieces, inst)
        cover = cover_from_forest(pieces, inst)
        assert len(cover) == len(attached)
        for c, t in zip(cover, attached):
            assert c.weight <= 2 * t.weight * (1 + 1e-12) + 1e-12
        assert cover.vertices == frozenset(range(inst.n))
        cs = list(cover)
        for i in range(len(cs)):
            for j in range(i + 1, len(cs)):
                shared = cs[i].vertices & cs[j].vertices
                assert len(shared) <= 1 and all(inst.is_depot(v) for v in shared)


def test_json_round_trip(line4):
    cover = cover_from_forest(build_rooted_spanning_forest(line4), line4)
    doc = json.loads(cover_to_json(cover))
    assert doc == {
        "cycles": [
            {"root": 0, "route": [0, 1, 0], "weight": 2.0},
            {"root": 3, "route": [3, 2, 3], "weight": 2.0},
        ],
        "max_weight": 2.0,
    }
    assert cover_from_document(doc) == cover


def test_dot_colours(line4):
    cover = cover_from_forest(build_rooted_spanning_forest(line4), line4)
    text = cover_to_dot(cover, line4)
    assert text.count("#1f77b4") == 2 and text.count("#ff7f0e") == 2
