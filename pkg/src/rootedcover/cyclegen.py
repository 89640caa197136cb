"""Turning decomposed forests into depot-rooted cycles."""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .decompose import DecomposedForest
from .forest import RootedTree
from .instance import MetricInstance


def route_weight(route: Sequence[int], w: np.ndarray) -> float:
    if len(route) < 2:
        return 0.0
    r = np.asarray(route)
    return float(w[r[:-1], r[1:]].sum())


@dataclass(frozen=True)
class Cycle:
    """Closed route ``[root, v1, ..., vr, root]``; a lone depot is ``[root]``."""

    root: int
    route: tuple[int, ...]
    weight: float

    @classmethod
    def from_route(cls, route: Sequence[int], w: np.ndarray) -> Cycle:
        route = tuple(int(v) for v in route)
        return cls(route[0], route, route_weight(route, w))

    @property
    def vertices(self) -> frozenset:
        return frozenset(self.route)

    @property
    def interior(self) -> tuple[int, ...]:
        return self.route[1:-1]

    def edges(self) -> list[tuple[int, int]]:
        return [(min(a, b), max(a, b)) for a, b in zip(self.route, self.route[1:])]


@dataclass(frozen=True)
class CycleCover:
    cycles: tuple[Cycle, ...]

    def __len__(self):
        return len(self.cycles)

    def __iter__(self):
        return iter(self.cycles)

    @property
    def max_weight(self) -> float:
        return max((c.weight for c in self.cycles), default=0.0)

    @property
    def vertices(self) -> frozenset:
        return frozenset().union(*(c.vertices for c in self.cycles))


def attach_depots(forest: DecomposedForest | Iterable[RootedTree], inst: MetricInstance) -> list[RootedTree]:
    """Root every tree at a depot.

    Trees holding a depot are rooted at their lowest depot.  A depot-free
    tree gains the single cheapest edge ``(d, v)`` from any depot ``d`` to
    any of its vertices ``v`` (ties: lowest ``d``, then lowest ``v``) and is
    rooted at ``d``.
    """
    depots = np.asarray(inst.depots)
    out = []
    for tree in forest:
        held = sorted(v for v in tree.vertices if inst.is_depot(v))
        if held:
            if tree.root != held[0]:
                tree = RootedTree(held[0], tree.edges, tree.vertices, tree.weight)
            out.append(tree)
            continue
        verts = np.array(sorted(tree.vertices))
        block = inst.w[np.ix_(depots, verts)]
        di, vi = divmod(int(np.argmin(block)), verts.size)
        d, v = int(depots[di]), int(verts[vi])
        w = float(inst.w[d, v])
        out.append(RootedTree(d, tree.edges + ((min(d, v), max(d, v), w),), tree.vertices | {d}, tree.weight + w))
    return out


def euler_shortcut(tree: RootedTree) -> list[int]:
    """Depth-first visit order from the root, children by ascending id.

    This is the doubled-edge Euler tour with repeated vertices skipped.
    """
    adj: dict[int, list[int]] = {v: [] for v in tree.vertices}
    for u, v, _ in tree.edges:
        adj[u].append(v)
        adj[v].append(u)
    seen = {tree.root}
    order = []
    stack = [tree.root]
    while stack:
        v = stack.pop()
        order.append(v)
        for u in sorted(adj[v], reverse=True):
            if u not in seen:
                seen.add(u)
                stack.append(u)
    return order


def tree_to_cycle(tree: RootedTree, inst: MetricInstance) -> Cycle:
    if tree.root is None:
        raise ValueError("tree has no root depot; attach it first")
    order = euler_shortcut(tree)
    route = order + [tree.root] if len(order) > 1 else order
    return Cycle.from_route(route, inst.w)


def _drop_shared(cycles: list[Cycle], inst: MetricInstance) -> list[Cycle]:
    """Shortcut vertices out of routes so that cycles meet only at common roots.

    A vertex that roots some cycle is removed from every route interior, and
    any other vertex keeps only its first interior occurrence.  Under a
    metric this never makes a route heavier.
    """
    roots = {c.root for c in cycles}
    seen: set[int] = set()
    out = []
    for c in cycles:
        keep = []
        for v in c.interior:
            if v in roots or v in seen:
                continue
            seen.add(v)
            keep.append(v)
        if len(keep) == len(c.interior):
            out.append(c)
        else:
            route = [c.root, *keep, c.root] if keep else [c.root]
            out.append(Cycle.from_route(route, inst.w))
    return out


def cover_from_forest(forest: DecomposedForest | Iterable[RootedTree], inst: MetricInstance) -> CycleCover:
    """Attach depots, then build one shortcut Euler cycle per tree."""
    cycles = [tree_to_cycle(t, inst) for t in attach_depots(forest, inst)]
    return CycleCover(tuple(_drop_shared(cycles, inst)))


def cover_to_document(cover: CycleCover) -> dict:
    return {
        "cycles": [{"root": c.root, "route": list(c.route), "weight": c.weight} for c in cover],
        "max_weight": cover.max_weight,
    }


def cover_from_document(doc: dict) -> CycleCover:
    cycles = []
    for c in doc["cycles"]:
        route = tuple(int(v) for v in c["route"])
        cycles.append(Cycle(int(c["root"]), route, float(c["weight"])))
    return CycleCover(tuple(cycles))


def cover_to_json(cover: CycleCover) -> str:
    return json.dumps(cover_to_document(cover), indent=1)


_PALETTE = ("#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
            "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf")


def cover_to_dot(cover: CycleCover, inst: MetricInstance, name: str = "cover") -> str:
    lines = [f"graph {name} {{", "  node [shape=ellipse];"]
    for d in inst.depots:
        lines.append(f'  {d} [shape=box, style=filled, fillcolor="#f4cccc"];')
    for i, c in enumerate(cover):
        color = _PALETTE[i % len(_PALETTE)]
        for a, b in zip(c.route, c.route[1:]):
            lines.append(f'  {a} -- {b} [color="{color}", label="{inst.w[a, b]:.6g}"];')
    lines.append("}")
    return "\n".join(lines) + "\n"
