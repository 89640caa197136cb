"""Splitting heavy trees into pieces lighter than ``2 * lam``.

For a tree ``T`` whose heaviest edge is at most ``lam``, :func:`split_tree`
returns subtrees that

* each weigh strictly less than ``2 * lam``,
* together contain every vertex of ``T`` and only edges of ``T``, and
* number at most ``max(floor(w(T) / lam), 1)``.

Two constructions are used.  The first cuts edges so that the pieces are
vertex-disjoint, using the fewest cuts possible (bottom-up greedy that keeps
the lightest child components).  Vertex-disjoint pieces cannot always meet
the count bound: a star of five unit edges with ``lam = 2`` needs three
disjoint pieces while the bound allows two.  When the greedy exceeds the
bound, an edge decomposition is returned instead, in which pieces are
edge-disjoint but may share a cut vertex; every piece but one then weighs at
least ``lam``, which is what gives the count bound.  Shared vertices are
resolved later, when trees become cycles.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .errors import PreconditionViolation
from .forest import Edge, ForestCandidate, RootedForest, RootedTree


@dataclass(frozen=True)
class DecomposedForest:
    subtrees: tuple[RootedTree, ...]
    lam: float
    origin: int | None = None
    #: index of the input tree each subtree came from
    source: tuple[int, ...] = ()

    def __len__(self):
        return len(self.subtrees)

    def __iter__(self):
        return iter(self.subtrees)


def piece_bound(weight: float, lam: float) -> int:
    return max(math.floor(weight / lam), 1)


def _orient(tree: RootedTree):
    """Preorder, parent map and parent-edge weights from the tree's root."""
    adj = tree.adjacency()
    root = tree.root if tree.root is not None else min(tree.vertices)
    order = [root]
    parent = {root: None}
    pw = {root: 0.0}
    children: dict[int, list[int]] = {v: [] for v in tree.vertices}
    stack = [root]
    while stack:
        v = stack.pop()
        for u, w in sorted(adj[v], reverse=True):
            if u in parent:
                continue
            parent[u] = v
            pw[u] = w
            children[v].append(u)
            order.append(u)
            stack.append(u)
    for v in children:
        children[v].sort()
    return order, parent, pw, children


def _piece(edges: Sequence[Edge], root: int | None, vertices=()) -> RootedTree:
    t = RootedTree.from_edges(edges, None, vertices)
    return RootedTree(root if root in t.vertices else None, t.edges, t.vertices, t.weight)


def _disjoint_split(tree: RootedTree, lam: float) -> list[RootedTree]:
    cap = 2 * lam
    order, parent, pw, children = _orient(tree)
    resid: dict[int, float] = {}
    cut: set[int] = set()
    for v in reversed(order):
        contrib = sorted((resid[c] + pw[c], c) for c in children[v])
        total = 0.0
        for i, (a, c) in enumerate(contrib):
            if total + a < cap:
                total += a
            else:
                # sorted ascending, so every remaining child is cut too
                cut.update(c2 for _, c2 in contrib[i:])
                break
        resid[v] = total

    comp: dict[int, int] = {}
    members: list[list[int]] = []
    edges: list[list[Edge]] = []
    for v in order:
        p = parent[v]
        if p is None or v in cut:
            comp[v] = len(members)
            members.append([v])
            edges.append([])
        else:
            c = comp[p]
            comp[v] = c
            members[c].append(v)
            edges[c].append((p, v, pw[v]))
    return [_piece(e, tree.root, m) for e, m in zip(edges, members)]


def _peel(edges: list[Edge], lam: float) -> tuple[list[Edge], list[Edge]]:
    """Cut one piece of weight in ``[lam, 2*lam)`` off a tree of weight >= lam.

    The remainder stays connected; it shares the cut vertex with the piece.
    """
    t = RootedTree.from_edges(edges)
    order, parent, pw, children = _orient(t)
    sub: dict[int, float] = {}
    for v in reversed(order):
        sub[v] = sum(sub[c] + pw[c] for c in children[v])

    def branch(x, c):
        out = [(x, c, pw[c])]
        stack = [c]
        while stack:
            y = stack.pop()
            for z in children[y]:
                out.append((y, z, pw[z]))
                stack.append(z)
        return out

    x = order[0]
    while True:
        heavy = [c for c in children[x] if sub[c] + pw[c] >= lam]
        if heavy:
            c = heavy[0]
            if sub[c] >= lam:
                x = c
                continue
            piece = branch(x, c)
            break
        piece, acc = [], 0.0
        for c in children[x]:
            piece += branch(x, c)
            acc += sub[c] + pw[c]
            if acc >= lam:
                break
        break
    taken = {(min(u, v), max(u, v)) for u, v, _ in piece}
    rest = [e for e in t.edges if (e[0], e[1]) not in taken]
    return piece, rest


def _edge_split(tree: RootedTree, lam: float) -> list[RootedTree]:
    order, parent, pw, children = _orient(tree)
    pending: dict[int, list[Edge]] = {}
    resid: dict[int, float] = {}
    pieces: list[list[Edge]] = []
    hubs: list[int] = []
    for v in reversed(order):
        bundle: list[Edge] = []
        acc = 0.0
        for c in children[v]:
            br = pending.pop(c) + [(v, c, pw[c])]
            beta = resid[c] + pw[c]
            if beta >= lam:
                pieces.append(br)
                hubs.append(v)
                continue
            bundle += br
            acc += beta
            if acc >= lam:
                pieces.append(bundle)
                hubs.append(v)
                bundle, acc = [], 0.0
        pending[v] = bundle
        resid[v] = acc

    root = order[0]
    rest = pending[root]
    if rest:
        rest_verts = {x for u, v, _ in rest for x in (u, v)}
        touching = [i for i, h in enumerate(hubs) if h in rest_verts]
        i = min(touching, key=lambda j: (sum(e[2] for e in pieces[j]), j))
        merged = pieces[i] + rest
        if sum(e[2] for e in merged) < 2 * lam:
            pieces[i] = merged
        else:
            a, b = _peel(merged, lam)
            pieces[i] = a
            pieces.append(b)
    return [_piece(p, tree.root) for p in pieces]


def split_tree(tree: RootedTree, lam: float) -> list[RootedTree]:
    """Split ``tree`` into pieces of weight ``< 2*lam``; see the module docstring.

    Raises :class:`PreconditionViolation` unless ``lam > 0`` and ``lam`` is at
    least the heaviest edge of the tree.
    """
    if not lam > 0:
        raise PreconditionViolation(f"lambda must be positive, got {lam}")
    if lam < tree.w_max:
        raise PreconditionViolation(f"lambda {lam} is below the heaviest tree edge {tree.w_max}")
    if tree.weight < 2 * lam:
        return [tree]
    pieces = _disjoint_split(tree, lam)
    if len(pieces) <= piece_bound(tree.weight, lam):
        return pieces
    return _edge_split(tree, lam)


def decompose_forest(cand: ForestCandidate | RootedForest, lam: float) -> DecomposedForest:
    """Replace every tree of weight ``>= 2*lam`` by its :func:`split_tree` pieces."""
    if isinstance(cand, ForestCandidate):
        forest, origin = cand.forest, cand.candidate_id
    else:
        forest, origin = cand, None
    if lam < forest.w_max:
        raise PreconditionViolation(f"lambda {lam} is below the heaviest forest edge {forest.w_max}")
    out: list[RootedTree] = []
    source: list[int] = []
    for i, tree in enumerate(forest.trees):
        parts = [tree] if tree.weight < 2 * lam else split_tree(tree, lam)
        out.extend(parts)
        source.extend([i] * len(parts))
    return DecomposedForest(tuple(out), lam, origin, tuple(source))
