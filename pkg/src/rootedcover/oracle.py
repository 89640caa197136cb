"""Exact solver for small instances, used as ground truth for the planner.

Tour costs come from a Held-Karp table per depot over every subset of the
sites.  Set partitions of the sites are enumerated as restricted growth
strings, pruned by the lightest tour each partial block could still
achieve, and every surviving partition tries all block-to-depot
assignments that leave at most ``k`` cycles in total (a depot that serves
no block still costs one cycle, the lone ``[d]``).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .cyclegen import Cycle, CycleCover
from .errors import InstanceTooLarge, NoFeasibleSolution
from .instance import MetricInstance

#: Largest number of non-depot vertices exact_solve accepts.
MAX_SITES = 9
#: Largest vertex set exact_tsp_cycle accepts.
MAX_TOUR = 10
#: Relaxed mode enumerates partitions of every vertex, so it is tighter.
MAX_RELAXED_VERTICES = 10


@dataclass(frozen=True)
class ExactSolution:
    lambda_star: float
    cover: CycleCover


def _held_karp(root: int, items: list[int], w: np.ndarray):
    """dp[mask, j]: lightest path from root through ``mask`` ending at item j."""
    s = len(items)
    idx = np.asarray(items, dtype=np.int64)
    sub = w[np.ix_(idx, idx)]
    dp = np.full((1 << s, s), np.inf)
    back = np.full((1 << s, s), -1, dtype=np.int64)
    for j in range(s):
        dp[1 << j, j] = w[root, items[j]]
    for mask in range(1, 1 << s):
        cur = dp[mask]
        if not np.isfinite(cur).any():
            continue
        step = cur[:, None] + sub
        best_prev = step.argmin(axis=0)
        best = step[best_prev, np.arange(s)]
        for j in range(s):
            if mask >> j & 1:
                continue
            nxt = mask | (1 << j)
            if best[j] < dp[nxt, j]:
                dp[nxt, j] = best[j]
                back[nxt, j] = best_prev[j]
    return dp, back


def _subset_tour_costs(root: int, items: list[int], w: np.ndarray) -> np.ndarray:
    """Optimal closed-tour cost from ``root`` through every subset of ``items``."""
    if not items:
        return np.zeros(1)
    dp, _ = _held_karp(root, items, w)
    closing = w[np.asarray(items), root]
    costs = (dp + closing[None, :]).min(axis=1)
    costs[0] = 0.0
    return costs


def _route_dp(root: int, items: list[int], w: np.ndarray) -> list[int]:
    dp, back = _held_karp(root, items, w)
    full = (1 << len(items)) - 1
    closing = w[np.asarray(items), root]
    j = int(np.argmin(dp[full] + closing))
    path = []
    mask = full
    while j >= 0:
        path.append(items[j])
        prev = int(back[mask, j])
        mask ^= 1 << j
        j = prev
    return [root, *reversed(path), root]


def _route_permutation(root: int, items: list[int], w: np.ndarray) -> list[int]:
    best, best_route = math.inf, None
    for perm in itertools.permutations(items):
        route = (root, *perm, root)
        cost = sum(w[a, b] for a, b in zip(route, route[1:]))
        if cost < best:
            best, best_route = cost, route
    return list(best_route)


def exact_tsp_cycle(vertices: Iterable[int], root: int, inst: MetricInstance, method: str = "dp") -> Cycle:
    """Lightest closed route from ``root`` through exactly ``vertices``.

    ``method`` is ``"dp"`` (Held-Karp) or ``"permutation"`` (enumerate every
    visiting order); both are exact.
    """
    others = sorted(set(int(v) for v in vertices) - {root})
    if len(others) + 1 > MAX_TOUR:
        raise InstanceTooLarge(f"exact tours are limited to {MAX_TOUR} vertices")
    if not others:
        return Cycle(root, (root,), 0.0)
    if method == "dp":
        route = _route_dp(root, others, inst.w)
    elif method == "permutation":
        route = _route_permutation(root, others, inst.w)
    else:
        raise ValueError(f"unknown method {method!r}")
    return Cycle.from_route(route, inst.w)


def _strict_search(inst: MetricInstance):
    sites = list(inst.sites)
    depots = list(inst.depots)
    s, m, k = len(sites), len(depots), inst.k
    cost = np.stack([_subset_tour_costs(d, sites, inst.w) for d in depots])
    lower = cost.min(axis=0)
    full = (1 << s) - 1

    # all sites on one cycle at the best depot: always within budget since k >= m
    d0 = int(np.argmin(cost[:, full]))
    best = [float(cost[d0, full]), [(full, d0)]]

    blocks: list[int] = []

    def assign(q: int):
        need = q + m - k
        if need <= 0:
            val = max(float(lower[b]) for b in blocks)
            if val < best[0]:
                picks = [(b, int(np.argmin(cost[:, b]))) for b in blocks]
                best[:] = [val, picks]
            return
        order = sorted(range(q), key=lambda i: -lower[blocks[i]])
        chosen = [0] * q

        def rec(pos: int, used: dict, cur: float):
            if len(used) + (q - pos) < need:
                return
            if pos == q:
                best[:] = [cur, [(blocks[i], chosen[i]) for i in range(q)]]
                return
            b = blocks[order[pos]]
            for di in np.argsort(cost[:, b], kind="stable"):
                c = float(cost[di, b])
                top = max(cur, c)
                if top >= best[0]:
                    break
                chosen[order[pos]] = int(di)
                used[int(di)] = used.get(int(di), 0) + 1
                rec(pos + 1, used, top)
                used[int(di)] -= 1
                if not used[int(di)]:
                    del used[int(di)]

        rec(0, {}, 0.0)

    def grow(i: int):
        if i == s:
            assign(len(blocks))
            return
        bit = 1 << i
        for j in range(len(blocks)):
            old = blocks[j]
            if lower[old | bit] >= best[0]:
                continue
            blocks[j] = old | bit
            grow(i + 1)
            blocks[j] = old
        if len(blocks) < k and lower[bit] < best[0]:
            blocks.append(bit)
            grow(i + 1)
            blocks.pop()

    if s:
        grow(0)
    groups = []
    served = set()
    for mask, di in best[1]:
        members = [sites[i] for i in range(s) if mask >> i & 1]
        groups.append((depots[di], members))
        served.add(depots[di])
    return groups, [d for d in depots if d not in served]


def _relaxed_search(inst: MetricInstance):
    n, k = inst.n, inst.k
    verts = list(range(n))
    tables = {d: _subset_tour_costs(d, [v for v in verts if v != d], inst.w) for d in inst.depots}
    depot_mask = sum(1 << d for d in inst.depots)

    def local(d: int, mask: int) -> int:
        # re-index a vertex mask onto the items list that excludes d
        low = mask & ((1 << d) - 1)
        high = (mask >> (d + 1)) << d
        return low | high

    cache: dict[int, tuple[float, int]] = {}

    def group_cost(mask: int) -> tuple[float, int]:
        hit = cache.get(mask)
        if hit is not None:
            return hit
        held = mask & depot_mask
        if held:
            d = (held & -held).bit_length() - 1
            out = (float(tables[d][local(d, mask & ~(1 << d))]), d)
        else:
            out = min((float(tables[d][local(d, mask)]), d) for d in inst.depots)
        cache[mask] = out
        return out

    best = [math.inf, None]
    blocks: list[int] = []

    def grow(i: int):
        if i == n:
            val = max(group_cost(b)[0] for b in blocks)
            if val < best[0]:
                best[:] = [val, list(blocks)]
            return
        bit = 1 << i
        for j in range(len(blocks)):
            old = blocks[j]
            if group_cost(old | bit)[0] >= best[0]:
                continue
            blocks[j] = old | bit
            grow(i + 1)
            blocks[j] = old
        if len(blocks) < k and group_cost(bit)[0] < best[0]:
            blocks.append(bit)
            grow(i + 1)
            blocks.pop()

    grow(0)
    groups = []
    for mask in best[1]:
        _, root = group_cost(mask)
        groups.append((root, [v for v in verts if mask >> v & 1]))
    return groups, []


def exact_solve(inst: MetricInstance, *, relaxed: bool = False) -> ExactSolution:
    """Optimal min-max cycle cover by exhaustive search.

    By default every cycle holds exactly one depot.  ``relaxed=True`` lets a
    cycle pass through several depots (it is rooted at the lowest one) and
    is meant for experiments on tiny instances.
    """
    if inst.k < inst.m:
        raise NoFeasibleSolution(f"k = {inst.k} < m = {inst.m}")
    if relaxed:
        if inst.n > MAX_RELAXED_VERTICES:
            raise InstanceTooLarge(f"relaxed exact search is limited to {MAX_RELAXED_VERTICES} vertices")
        groups, idle = _relaxed_search(inst)
    else:
        if inst.n - inst.m > MAX_SITES:
            raise InstanceTooLarge(f"exact search is limited to {MAX_SITES} non-depot vertices")
        groups, idle = _strict_search(inst)
    cycles = [exact_tsp_cycle(members, root, inst) for root, members in groups]
    cycles += [Cycle(d, (d,), 0.0) for d in idle]
    cycles.sort(key=lambda c: (c.root, c.route))
    cover = CycleCover(tuple(cycles))
    return ExactSolution(cover.max_weight, cover)
