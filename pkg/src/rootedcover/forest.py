"""Rooted spanning forests and the candidate forests built from them.

The planner starts from a minimum-weight forest with one tree per depot
(every depot collapsed into one super-root, a Prim MST grown from it, then
the super-root split back apart).  The trees are then glued together with
the ``m - 1`` cheapest inter-tree connectors, and every subset of those
connectors gives one candidate forest.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .instance import MetricInstance

Edge = tuple[int, int, float]


@dataclass(frozen=True)
class RootedTree:
    """A tree given by its weighted edges.

    ``root`` is a depot id, or ``None`` for pieces cut off during
    decomposition that hold no depot yet.  A tree with no edges is a single
    vertex and therefore needs ``vertices`` spelled out.
    """

    root: int | None
    edges: tuple[Edge, ...]
    vertices: frozenset
    weight: float

    @classmethod
    def from_edges(cls, edges: Iterable[Edge], root: int | None = None, vertices: Iterable[int] = ()) -> RootedTree:
        edges = tuple((min(u, v), max(u, v), float(w)) for u, v, w in edges)
        verts = set(vertices)
        for u, v, _ in edges:
            verts.add(u)
            verts.add(v)
        if root is not None:
            verts.add(root)
        return cls(root, edges, frozenset(verts), float(sum(w for _, _, w in edges)))

    @classmethod
    def singleton(cls, v: int, root: int | None = None) -> RootedTree:
        return cls(root, (), frozenset((v,)), 0.0)

    @property
    def w_max(self) -> float:
        return max((w for _, _, w in self.edges), default=0.0)

    def adjacency(self) -> dict[int, list[tuple[int, float]]]:
        adj: dict[int, list[tuple[int, float]]] = {v: [] for v in self.vertices}
        for u, v, w in self.edges:
            adj[u].append((v, w))
            adj[v].append((u, w))
        return adj


@dataclass(frozen=True)
class RootedForest:
    trees: tuple[RootedTree, ...]

    def __len__(self):
        return len(self.trees)

    def __iter__(self) -> Iterator[RootedTree]:
        return iter(self.trees)

    @property
    def weight(self) -> float:
        return float(sum(t.weight for t in self.trees))

    @property
    def w_max(self) -> float:
        return max((t.w_max for t in self.trees), default=0.0)

    @property
    def edges(self) -> list[Edge]:
        return [e for t in self.trees for e in t.edges]


@dataclass(frozen=True)
class ConnectorEdgeSet:
    """Inter-tree edges in the order the greedy merge picked them."""

    edges: tuple[Edge, ...]

    def __len__(self):
        return len(self.edges)

    def __iter__(self):
        return iter(self.edges)

    def __getitem__(self, i):
        return self.edges[i]

    @property
    def w_max(self) -> float:
        return max((w for _, _, w in self.edges), default=0.0)


@dataclass(frozen=True)
class ForestCandidate:
    candidate_id: int
    selected_connectors: tuple[int, ...]
    forest: RootedForest


def _trees_from_edges(n: int, edges: Sequence[Edge], roots: Sequence[int], is_root) -> list[RootedTree]:
    """Split an edge list over ``range(n)`` into trees, one per root-containing component."""
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v, _ in edges:
        parent[find(u)] = find(v)
    members: dict[int, list[int]] = {}
    for v in range(n):
        members.setdefault(find(v), []).append(v)
    tree_edges: dict[int, list[Edge]] = {}
    for e in edges:
        tree_edges.setdefault(find(e[0]), []).append(e)

    trees = []
    for r in roots:
        comp = find(r)
        root = min(v for v in members[comp] if is_root(v))
        trees.append(RootedTree.from_edges(tree_edges.get(comp, ()), root, members[comp]))
    return trees


def build_rooted_spanning_forest(inst: MetricInstance) -> RootedForest:
    """Minimum rooted spanning forest with exactly one tree per depot.

    All depots act as one super-root whose distance to a site is that site's
    distance to its nearest depot.  Prim's algorithm grows an MST from the
    super-root; each super-root edge is then re-attached to the nearest
    depot (lowest id on ties).  Equal-weight frontier edges are taken in
    order of their ``(min endpoint, max endpoint)`` pair, the super-root
    counting as endpoint ``-1``.
    """
    w = inst.w
    depots = np.asarray(inst.depots, dtype=np.int64)
    sites = np.asarray(inst.sites, dtype=np.int64)
    if sites.size == 0:
        return RootedForest(tuple(RootedTree.singleton(int(d), int(d)) for d in depots))

    to_depots = w[np.ix_(depots, sites)]
    # argmin returns the first minimum, i.e. the lowest depot id
    key = to_depots.min(axis=0).copy()
    par = depots[to_depots.argmin(axis=0)].copy()
    # the super-root sorts before every vertex in the tie-break
    lo = np.full(sites.size, -1, dtype=np.int64)
    hi = sites.copy()
    done = np.zeros(sites.size, dtype=bool)
    sub = w[np.ix_(sites, sites)]

    edges: list[Edge] = []
    for _ in range(sites.size):
        open_idx = np.flatnonzero(~done)
        kmin = key[open_idx].min()
        ties = open_idx[key[open_idx] == kmin]
        if ties.size > 1:
            order = np.lexsort((hi[ties], lo[ties]))
            pick = int(ties[order[0]])
        else:
            pick = int(ties[0])
        done[pick] = True
        v = int(sites[pick])
        p = int(par[pick])
        edges.append((min(p, v), max(p, v), float(w[p, v])))

        nw = sub[pick]
        nlo = np.minimum(sites, v)
        nhi = np.maximum(sites, v)
        better = (nw < key) | ((nw == key) & ((nlo < lo) | ((nlo == lo) & (nhi < hi))))
        better &= ~done
        key[better] = nw[better]
        par[better] = v
        lo[better] = nlo[better]
        hi[better] = nhi[better]

    return RootedForest(tuple(_trees_from_edges(inst.n, edges, inst.depots, inst.is_depot)))


def build_connector_edges(inst: MetricInstance, fstar: RootedForest) -> ConnectorEdgeSet:
    """Greedy inter-tree edges that join the forest into one spanning tree.

    Each round takes the globally lightest edge between two different trees
    (ties by lower endpoints) and merges those trees.
    """
    n = inst.n
    label = np.empty(n, dtype=np.int64)
    for i, tree in enumerate(fstar.trees):
        label[list(tree.vertices)] = i
    w = inst.w
    upper = np.triu(np.ones((n, n), dtype=bool), k=1)
    chosen: list[Edge] = []
    for _ in range(len(fstar.trees) - 1):
        across = (label[:, None] != label[None, :]) & upper
        masked = np.where(across, w, np.inf)
        # row-major argmin breaks weight ties by (min endpoint, max endpoint)
        i, j = divmod(int(np.argmin(masked)), n)
        chosen.append((i, j, float(w[i, j])))
        label[label == label[j]] = label[i]
    return ConnectorEdgeSet(tuple(chosen))


def merge_forest(fstar: RootedForest, connectors: Sequence[Edge]) -> RootedForest:
    """Join trees of ``fstar`` along ``connectors``; merged roots are the lowest depot."""
    owner = {v: i for i, t in enumerate(fstar.trees) for v in t.vertices}
    parent = list(range(len(fstar.trees)))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v, _ in connectors:
        a, b = find(owner[u]), find(owner[v])
        if a == b:
            raise ValueError(f"connector ({u}, {v}) closes a cycle")
        parent[b] = a

    groups: dict[int, list[int]] = {}
    for i in range(len(fstar.trees)):
        groups.setdefault(find(i), []).append(i)
    extra: dict[int, list[Edge]] = {}
    for e in connectors:
        extra.setdefault(find(owner[e[0]]), []).append(e)

    trees = []
    for g, idxs in groups.items():
        parts = [fstar.trees[i] for i in idxs]
        edges = [e for t in parts for e in t.edges] + extra.get(g, [])
        verts = frozenset().union(*(t.vertices for t in parts))
        roots = [t.root for t in parts if t.root is not None]
        root = min(roots) if roots else None
        trees.append(RootedTree(root, tuple(edges), verts, float(sum(e[2] for e in edges))))
    trees.sort(key=lambda t: (t.root is None, t.root if t.root is not None else min(t.vertices)))
    return RootedForest(tuple(trees))


def enumerate_candidates(fstar: RootedForest, conn: ConnectorEdgeSet) -> Iterator[ForestCandidate]:
    """Yield all ``2**len(conn)`` merged forests, by ascending subset bitmask.

    Bit ``i`` of the candidate id selects connector ``i``; id 0 is ``fstar``
    itself and the all-ones id is the single spanning tree.
    """
    size = len(conn)
    for mask in range(1 << size):
        picked = tuple(i for i in range(size) if mask >> i & 1)
        forest = fstar if mask == 0 else merge_forest(fstar, [conn[i] for i in picked])
        yield ForestCandidate(mask, picked, forest)


def forest_to_dot(forest: RootedForest, inst: MetricInstance | None = None, name: str = "forest") -> str:
    """Graphviz text: depots as boxes, edges labelled with their weight."""
    lines = [f"graph {name} {{"]
    depots = set(inst.depots) if inst is not None else {t.root for t in forest if t.root is not None}
    for ti, tree in enumerate(forest):
        lines.append(f"  subgraph cluster_{ti} {{")
        lines.append(f'    label="tree {ti} (root {tree.root}, w={tree.weight:.6g})";')
        for v in sorted(tree.vertices):
            shape = "box" if v in depots else "ellipse"
            style = ', style=filled, fillcolor="#f4cccc"' if v in depots else ""
            lines.append(f"    {v} [shape={shape}{style}];")
        lines.append("  }")
        for u, v, w in tree.edges:
            lines.append(f'  {u} -- {v} [label="{w:.6g}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
