"""Random geometric instances and wall-clock scaling runs."""

from __future__ import annotations

import csv
import io
import math
import time
from dataclasses import dataclass

import numpy as np

from .instance import MetricInstance, euclidean_instance
from .planner import solve

CORNERS = np.array([[0.0, 0.0], [1.0, 1.0], [1.0, 0.0], [0.0, 1.0]])
LADDER = (50, 100, 200, 400, 800)
M_SWEEP = (1, 2, 3, 4, 5)


def corner_depots(points: np.ndarray, m: int) -> list[int]:
    """The point nearest each corner in turn, cycling through the corners."""
    taken: list[int] = []
    for i in range(m):
        d = np.linalg.norm(points - CORNERS[i % 4], axis=1)
        d[taken] = np.inf
        taken.append(int(np.argmin(d)))
    return sorted(taken)


def geometric_instance(n: int, m: int, k: int, epsilon: float = 0.25, seed: int = 0) -> MetricInstance:
    if not 1 <= m <= n:
        raise ValueError(f"need 1 <= m <= n, got m = {m}, n = {n}")
    if k < m:
        raise ValueError(f"need k >= m, got k = {k}, m = {m}")
    rng = np.random.default_rng(seed)
    pts = rng.random((n, 2))
    return euclidean_instance(pts, corner_depots(pts, m), k, epsilon)


@dataclass(frozen=True)
class BenchRow:
    n: int
    m: int
    k: int
    seconds: float
    iterations: int
    candidates: int


def time_solve(inst: MetricInstance, repeats: int = 1) -> tuple[float, int, int]:
    """Best-of-``repeats`` wall time of a serial solve (input validation excluded)."""
    best = math.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        sol = solve(inst, parallelism=1, validate=False)
        best = min(best, time.perf_counter() - t0)
    return best, sol.stats["iterations"], sol.stats["candidates"]


def run_ladder(sizes=LADDER, m: int = 3, k: int | None = None, seed: int = 0, repeats: int = 1) -> list[BenchRow]:
    rows = []
    for n in sizes:
        kk = k if k is not None else max(math.ceil(n / 10), m)
        inst = geometric_instance(n, m, kk, seed=seed)
        secs, its, cands = time_solve(inst, repeats)
        rows.append(BenchRow(n, m, kk, secs, its, cands))
    return rows


def run_m_sweep(ms=M_SWEEP, n: int = 100, k: int = 10, seed: int = 0, repeats: int = 1) -> list[BenchRow]:
    rows = []
    for m in ms:
        inst = geometric_instance(n, m, max(k, m), seed=seed)
        secs, its, cands = time_solve(inst, repeats)
        rows.append(BenchRow(n, m, max(k, m), secs, its, cands))
    return rows


def loglog_slope(xs, ys) -> float:
    slope, _ = np.polyfit(np.log(np.asarray(xs, float)), np.log(np.asarray(ys, float)), 1)
    return float(slope)


def per_unit_ratio(rows: list[BenchRow]) -> float:
    """Geometric mean of consecutive time ratios, i.e. time growth per unit of m."""
    t = np.array([r.seconds for r in rows])
    return float(np.exp(np.mean(np.log(t[1:] / t[:-1]))))


def rows_to_csv(rows: list[BenchRow], summary: dict | None = None) -> str:
    buf = io.StringIO()
    out = csv.writer(buf, lineterminator="\n")
    out.writerow(("n", "m", "k", "seconds", "iterations", "candidates"))
    for r in rows:
        out.writerow((r.n, r.m, r.k, f"{r.seconds:.6f}", r.iterations, r.candidates))
    for key, val in (summary or {}).items():
        out.writerow((f"# {key}", f"{val:.4f}"))
    return buf.getvalue()
