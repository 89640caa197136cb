"""The rooted min-max cycle cover solver.

:func:`solve` builds the minimum rooted spanning forest, enumerates every
candidate forest obtained by gluing its trees with connector edges, and for
each candidate binary-searches the piece-size parameter ``lam``.  Every
``lam`` that yields at most ``k`` pieces produces a cycle cover; the lightest
one seen across all candidates is returned.
"""

from __future__ import annotations

import csv
import io
import json
import math
import os
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .cyclegen import CycleCover, cover_from_forest, cover_to_document, route_weight
from .decompose import decompose_forest
from .errors import NoFeasibleSolution, ValidationError
from .forest import (
    ConnectorEdgeSet,
    ForestCandidate,
    RootedForest,
    build_connector_edges,
    build_rooted_spanning_forest,
    enumerate_candidates,
)
from .instance import MetricInstance, Violation, validate_instance

#: Environment variable consulted for the default worker count.
PARALLELISM_ENV = "ROOTEDCOVER_PARALLELISM"

WEIGHT_RTOL = 1e-9


@dataclass(frozen=True)
class SearchIteration:
    ell: int
    a: float
    b: float
    lam: float
    tree_count: int
    feasible: bool
    cover_weight: float | None


@dataclass(frozen=True)
class SearchTrace:
    candidate_id: int
    iterations: tuple[SearchIteration, ...]
    a_initial: float
    b_initial: float

    def __len__(self):
        return len(self.iterations)


@dataclass(frozen=True)
class Solution:
    cover: CycleCover
    objective: float
    candidate_id: int
    traces: tuple[SearchTrace, ...]
    stats: dict = field(default_factory=dict)
    epsilon: float = 0.25


def initial_interval(cand: ForestCandidate, inst: MetricInstance) -> tuple[float, float]:
    return cand.forest.w_max, (inst.n + inst.k) * inst.w_max


def absolute_floor(inst: MetricInstance) -> float:
    """Interval width at which the search stops even if the lower end is 0."""
    return inst.epsilon * max(inst.w_max, math.ulp(0.0)) * 2.0**-40


def search_candidate(cand: ForestCandidate, inst: MetricInstance) -> tuple[CycleCover | None, SearchTrace]:
    """Binary search on ``lam`` for one candidate forest.

    Feasible midpoints (at most ``k`` pieces) shrink the upper end and
    compete for the best cover; infeasible ones raise the lower end.  The
    loop stops once ``b - a < epsilon * a / 2`` for the interval the
    midpoint was taken from.
    """
    a, b = initial_interval(cand, inst)
    a0, b0 = a, b
    floor = absolute_floor(inst)
    best: CycleCover | None = None
    best_weight = math.inf
    rows = []
    ell = 1
    while True:
        lam = 0.5 * (a + b)
        pieces = decompose_forest(cand, lam)
        count = len(pieces)
        feasible = count <= inst.k
        weight = None
        if feasible:
            cover = cover_from_forest(pieces, inst)
            weight = cover.max_weight
            if weight < best_weight:
                best, best_weight = cover, weight
            a_next, b_next = a, lam
        else:
            a_next, b_next = lam, b
        rows.append(SearchIteration(ell, a, b, lam, count, feasible, weight))
        if b - a < 0.5 * inst.epsilon * a or b - a < floor:
            break
        a, b = a_next, b_next
        ell += 1
    return best, SearchTrace(cand.candidate_id, tuple(rows), a0, b0)


def _search_job(args):
    cand, inst = args
    return search_candidate(cand, inst)


def default_parallelism() -> int:
    raw = os.environ.get(PARALLELISM_ENV)
    if not raw:
        return 1
    value = int(raw)
    if value < 1:
        raise ValueError(f"{PARALLELISM_ENV} must be >= 1, got {value}")
    return value


def prepare(inst: MetricInstance) -> tuple[RootedForest, ConnectorEdgeSet, list[ForestCandidate]]:
    fstar = build_rooted_spanning_forest(inst)
    conn = build_connector_edges(inst, fstar)
    return fstar, conn, list(enumerate_candidates(fstar, conn))


def solve(inst: MetricInstance, *, parallelism: int | None = None, validate: bool = True) -> Solution:
    """Approximate the rooted min-max cycle cover of ``inst``.

    The objective is at most ``(5 + epsilon)`` times the optimum.  Candidate
    searches are independent; with ``parallelism > 1`` they run in worker
    processes and are reduced in candidate order, so the result does not
    depend on the worker count.
    """
    started = time.perf_counter()
    if validate:
        report = validate_instance(inst)
        if report:
            raise ValidationError(report)
    if parallelism is None:
        parallelism = default_parallelism()
    if parallelism < 1:
        raise ValueError("parallelism must be >= 1")

    fstar = build_rooted_spanning_forest(inst)
    if inst.w_max == 0:
        cover = cover_from_forest(fstar.trees, inst)
        elapsed = (time.perf_counter() - started) * 1e3
        return Solution(cover, 0.0, 0, (), {"iterations": 0, "candidates": 0, "elapsed_ms": elapsed}, inst.epsilon)

    conn = build_connector_edges(inst, fstar)
    candidates = list(enumerate_candidates(fstar, conn))
    jobs = [(c, inst) for c in candidates]
    if parallelism == 1 or len(jobs) == 1:
        results = [_search_job(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=min(parallelism, len(jobs))) as pool:
            results = list(pool.map(_search_job, jobs))

    best, best_id, best_weight = None, -1, math.inf
    for cand, (cover, _) in zip(candidates, results):
        if cover is not None and cover.max_weight < best_weight:
            best, best_id, best_weight = cover, cand.candidate_id, cover.max_weight
    if best is None:
        raise NoFeasibleSolution("no candidate forest produced at most k pieces")
    traces = tuple(t for _, t in results)
    elapsed = (time.perf_counter() - started) * 1e3
    stats = {
        "iterations": sum(len(t) for t in traces),
        "candidates": len(candidates),
        "elapsed_ms": elapsed,
    }
    return Solution(best, best_weight, best_id, traces, stats, inst.epsilon)


def validate_cover(cover: CycleCover, inst: MetricInstance, *, strict: bool = False) -> list[Violation]:
    """Check a cover against the problem constraints; empty list means valid.

    With ``strict`` every cycle must hold exactly one depot; otherwise a cycle
    may pass through further depots as long as it is rooted at one.
    """
    report: list[Violation] = []
    n = inst.n
    if len(cover.cycles) > inst.k:
        report.append(Violation("c1", f"{len(cover.cycles)} cycles exceed k = {inst.k}", (len(cover.cycles), inst.k)))

    owner: dict[tuple[int, int], int] = {}
    seen_vertices: set[int] = set()
    for ci, c in enumerate(cover.cycles):
        route = c.route
        if not route:
            report.append(Violation("route", f"cycle {ci} has an empty route", (ci,)))
            continue
        bad = [v for v in route if not 0 <= v < n]
        if bad:
            report.append(Violation("route", f"cycle {ci} visits unknown vertices {bad}", (ci,)))
            continue
        if route[0] != c.root or route[-1] != c.root:
            report.append(Violation("root", f"cycle {ci} does not start and end at its root {c.root}", (ci,)))
        if not inst.is_depot(c.root):
            report.append(Violation("root", f"cycle {ci} is rooted at non-depot {c.root}", (ci,)))
        if len(route) == 2:
            report.append(Violation("route", f"cycle {ci} route {list(route)} is malformed", (ci,)))
        interior = route[1:-1]
        if len(set(interior)) != len(interior) or c.root in interior:
            report.append(Violation("route", f"cycle {ci} repeats a vertex", (ci,)))
        held = {v for v in route if inst.is_depot(v)}
        if strict and len(held) != 1:
            report.append(Violation("c3", f"cycle {ci} holds {len(held)} depots {sorted(held)}", (ci,)))
        seen_vertices.update(route)
        for e in set(c.edges()):
            if e in owner and owner[e] != ci:
                report.append(Violation("c2", f"edge {e} lies on cycles {owner[e]} and {ci}", (owner[e], ci, e)))
            owner.setdefault(e, ci)
        actual = route_weight(route, inst.w)
        if not math.isclose(c.weight, actual, rel_tol=WEIGHT_RTOL, abs_tol=1e-12):
            report.append(Violation("weight", f"cycle {ci} stores weight {c.weight}, route weighs {actual}", (ci,)))

    missing = sorted(set(range(n)) - seen_vertices)
    for v in missing:
        report.append(Violation("c4", f"vertex {v} is not covered", (v,)))
    return report


# -- exports -----------------------------------------------------------------


def solution_to_document(sol: Solution) -> dict:
    doc = cover_to_document(sol.cover)
    doc.update(
        objective=sol.objective,
        candidate_id=sol.candidate_id,
        epsilon=sol.epsilon,
        iterations=sol.stats.get("iterations", 0),
        elapsed_ms=sol.stats.get("elapsed_ms", 0.0),
    )
    return doc


def solution_to_json(sol: Solution, *, timing: bool = True) -> str:
    doc = solution_to_document(sol)
    if not timing:
        doc.pop("elapsed_ms")
    return json.dumps(doc, indent=1) + "\n"


TRACE_COLUMNS = ("candidate_id", "ell", "a", "b", "lambda", "tree_count", "feasible", "cover_weight")


def traces_to_csv(traces) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(TRACE_COLUMNS)
    for t in traces:
        for it in t.iterations:
            writer.writerow([
                t.candidate_id, it.ell, repr(it.a), repr(it.b), repr(it.lam), it.tree_count,
                int(it.feasible), "" if it.cover_weight is None else repr(it.cover_weight),
            ])
    return buf.getvalue()


def iteration_bound(inst: MetricInstance, cand_w_max: float) -> int | None:
    """Most binary-search rounds a candidate can take, ``None`` if unbounded by the formula."""
    if cand_w_max <= 0:
        return None
    ratio = (inst.n + inst.k) * inst.w_max / (0.5 * inst.epsilon * cand_w_max)
    return math.ceil(math.log2(ratio)) + 1

