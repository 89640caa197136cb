"""Problem instances: raw site graphs, metric closure and validation.

A planning problem is a complete graph over sites and depots whose edge
weights form a metric.  Physical inspection layouts usually come as a sparse
graph of walkable paths instead; :func:`metric_closure` turns such a graph
into the complete shortest-path metric the planner works on.

Instance files are JSON documents::

    {"n": 4, "depots": [0, 3], "k": 2, "epsilon": 0.25,
     "matrix": [[0, 1, 2, 3], ...]}

where ``"matrix"`` may be replaced by ``"edges": [[u, v, w], ...]`` to give
a sparse graph that is closed automatically.
"""

from __future__ import annotations

import enum
import heapq
import io
import json
import math
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

import numpy as np

from .errors import DisconnectedGraph, ParseError, ValidationError

#: Relative tolerance for the symmetry and triangle-inequality checks.
METRIC_RTOL = 1e-9


class VertexKind(enum.Enum):
    DEPOT = "depot"
    SITE = "site"


@dataclass(frozen=True)
class Vertex:
    id: int
    kind: VertexKind


@dataclass(frozen=True)
class RawSiteGraph:
    """Sparse weighted graph of the paths robots can physically take.

    ``k`` and ``epsilon`` ride along when the graph was read from an
    instance file so that :func:`close_instance` can finish the job.
    """

    vertex_count: int
    edges: tuple[tuple[int, int, float], ...]
    depot_ids: tuple[int, ...]
    k: int | None = None
    epsilon: float | None = None

    def __post_init__(self):
        edges = tuple((int(u), int(v), float(w)) for u, v, w in self.edges)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "depot_ids", tuple(sorted(int(d) for d in self.depot_ids)))


@dataclass(frozen=True, eq=False)
class MetricInstance:
    """Complete metric graph with depots, robot budget ``k`` and ``epsilon``.

    The weight matrix is copied into a read-only float64 array and depots are
    stored in ascending order, so ties that are resolved "by lowest depot id"
    follow the tuple order.  Construction does not validate; call
    :func:`validate_instance` for that.
    """

    w: np.ndarray
    depots: tuple[int, ...]
    k: int
    epsilon: float = 0.25

    def __post_init__(self):
        w = np.array(self.w, dtype=np.float64)
        w.setflags(write=False)
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "depots", tuple(sorted(int(d) for d in self.depots)))
        object.__setattr__(self, "k", int(self.k))
        object.__setattr__(self, "epsilon", float(self.epsilon))
        object.__setattr__(self, "_depot_set", frozenset(self.depots))

    @property
    def n(self) -> int:
        return int(self.w.shape[0])

    @property
    def m(self) -> int:
        return len(self.depots)

    @property
    def sites(self) -> tuple[int, ...]:
        """Non-depot vertices in ascending order."""
        depots = set(self.depots)
        return tuple(v for v in range(self.n) if v not in depots)

    @property
    def w_max(self) -> float:
        return float(self.w.max()) if self.n else 0.0

    def is_depot(self, v: int) -> bool:
        return v in self._depot_set

    def vertices(self) -> list[Vertex]:
        return [
            Vertex(v, VertexKind.DEPOT if self.is_depot(v) else VertexKind.SITE)
            for v in range(self.n)
        ]

    def with_params(self, *, k: int | None = None, epsilon: float | None = None) -> MetricInstance:
        return MetricInstance(
            self.w,
            self.depots,
            self.k if k is None else k,
            self.epsilon if epsilon is None else epsilon,
        )


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str
    witness: tuple | None = field(default=None, compare=False)

    def __str__(self):
        return f"[{self.kind}] {self.message}"


def line_instance(positions: Sequence[float], depots: Iterable[int], k: int, epsilon: float = 0.25) -> MetricInstance:
    """Points on a line, weighted by absolute distance."""
    x = np.asarray(positions, dtype=np.float64)
    return MetricInstance(np.abs(x[:, None] - x[None, :]), tuple(depots), k, epsilon)


def euclidean_instance(points, depots: Iterable[int], k: int, epsilon: float = 0.25) -> MetricInstance:
    p = np.asarray(points, dtype=np.float64)
    diff = p[:, None, :] - p[None, :, :]
    return MetricInstance(np.sqrt((diff**2).sum(axis=-1)), tuple(depots), k, epsilon)


def validate_raw(raw: RawSiteGraph) -> list[Violation]:
    report = []
    n = raw.vertex_count
    if n < 1:
        report.append(Violation("size", f"vertex_count must be positive, got {n}"))
    for idx, (u, v, w) in enumerate(raw.edges):
        if not (0 <= u < n and 0 <= v < n):
            report.append(Violation("vertex-range", f"edge {idx} ({u}, {v}) leaves [0, {n})", (u, v)))
        elif u == v:
            report.append(Violation("self-loop", f"edge {idx} is a self-loop at {u}", (u,)))
        if not math.isfinite(w) or w < 0:
            report.append(Violation("weight", f"edge {idx} ({u}, {v}) has weight {w}", (u, v)))
    for d in raw.depot_ids:
        if not 0 <= d < n:
            report.append(Violation("depot-range", f"depot {d} outside [0, {n})", (d,)))
    return report


def metric_closure(raw: RawSiteGraph) -> np.ndarray:
    """All-pairs shortest-path distances of ``raw`` (Dijkstra from every vertex).

    Parallel edges keep their lightest weight.  Raises
    :class:`DisconnectedGraph` when some pair is unreachable.
    """
    report = validate_raw(raw)
    if report:
        raise ValidationError(report)
    n = raw.vertex_count
    adj: list[dict[int, float]] = [{} for _ in range(n)]
    for u, v, w in raw.edges:
        if w < adj[u].get(v, math.inf):
            adj[u][v] = w
            adj[v][u] = w

    dist = np.full((n, n), np.inf)
    for src in range(n):
        row = dist[src]
        row[src] = 0.0
        heap = [(0.0, src)]
        while heap:
            d, u = heapq.heappop(heap)
            if d > row[u]:
                continue
            for v, w in adj[u].items():
                nd = d + w
                if nd < row[v]:
                    row[v] = nd
                    heapq.heappush(heap, (nd, v))
        missing = np.flatnonzero(np.isinf(row))
        if missing.size:
            raise DisconnectedGraph(src, int(missing[0]))
    # separate runs per source can differ in the last ulp; keep it exactly symmetric
    return np.minimum(dist, dist.T)


def close_instance(raw: RawSiteGraph, k: int | None = None, epsilon: float | None = None) -> MetricInstance:
    k = raw.k if k is None else k
    epsilon = raw.epsilon if epsilon is None else epsilon
    if k is None or epsilon is None:
        raise ValueError("k and epsilon are required to build an instance")
    return MetricInstance(metric_closure(raw), raw.depot_ids, k, epsilon)


def validate_instance(inst: MetricInstance) -> list[Violation]:
    """Return every violated instance invariant; an empty list means valid.

    Triangle violations are reported once per unordered pair ``(i, j)`` with
    the intermediate vertex ``l`` giving the shortest detour, as the witness
    triple ``(i, l, j)``.
    """
    report: list[Violation] = []
    w = inst.w
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        report.append(Violation("shape", f"weight matrix must be square, got shape {w.shape}"))
        w = None
    elif w.shape[0] == 0:
        report.append(Violation("shape", "instance has no vertices"))
        w = None

    if w is not None:
        n = w.shape[0]
        finite = np.isfinite(w)
        if not finite.all():
            i, j = map(int, np.argwhere(~finite)[0])
            report.append(Violation("weight", f"w({i},{j}) is not finite", (i, j)))
        else:
            neg = np.argwhere(w < 0)
            for i, j in neg:
                if i < j or (i == j):
                    report.append(Violation("negative", f"w({i},{j}) = {w[i, j]} < 0", (int(i), int(j))))
            diag = np.flatnonzero(np.diag(w) != 0)
            for i in diag:
                report.append(Violation("diagonal", f"w({i},{i}) = {w[i, i]} != 0", (int(i),)))
            scale = float(np.abs(w).max())
            atol = METRIC_RTOL * scale
            asym = np.argwhere(np.abs(w - w.T) > atol + METRIC_RTOL * np.abs(w))
            for i, j in asym:
                if i < j:
                    report.append(Violation("symmetry", f"w({i},{j}) = {w[i, j]} but w({j},{i}) = {w[j, i]}", (int(i), int(j))))
            best = np.full((n, n), np.inf)
            via = np.zeros((n, n), dtype=np.int64)
            for l in range(n):
                detour = w[:, l, None] + w[None, l, :]
                better = detour < best
                best[better] = detour[better]
                via[better] = l
            bad = np.argwhere(w > best * (1 + METRIC_RTOL) + atol)
            for i, j in bad:
                if i < j:
                    l = int(via[i, j])
                    report.append(Violation(
                        "triangle",
                        f"w({i},{j}) = {w[i, j]} exceeds w({i},{l}) + w({l},{j}) = {best[i, j]}",
                        (int(i), l, int(j)),
                    ))

    n = inst.w.shape[0] if inst.w.ndim == 2 else 0
    if not inst.depots:
        report.append(Violation("depots", "depot set is empty"))
    if len(set(inst.depots)) != len(inst.depots):
        report.append(Violation("depots", f"duplicate depot ids in {list(inst.depots)}"))
    for d in inst.depots:
        if not 0 <= d < n:
            report.append(Violation("depot-range", f"depot {d} outside [0, {n})", (d,)))
    if inst.k < inst.m:
        report.append(Violation(
            "budget",
            f"k = {inst.k} < m = {inst.m}: every depot needs its own cycle, no feasible cover exists",
            (inst.k, inst.m),
        ))
    if not 0 < inst.epsilon < 1:
        report.append(Violation("epsilon", f"epsilon = {inst.epsilon} outside (0, 1)"))
    return report


# -- serialization ---------------------------------------------------------


def _require(doc: dict, key: str, kind, what: str):
    if key not in doc:
        raise ParseError(f"missing required field {what}", key)
    value = doc[key]
    if kind is int and (isinstance(value, bool) or not isinstance(value, int)):
        raise ParseError(f"expected an integer, got {value!r}", key)
    if kind is float and (isinstance(value, bool) or not isinstance(value, (int, float))):
        raise ParseError(f"expected a number, got {value!r}", key)
    if kind is list and not isinstance(value, list):
        raise ParseError(f"expected a list, got {type(value).__name__}", key)
    return value


def parse_instance_document(doc: Any) -> MetricInstance | RawSiteGraph:
    """Turn a decoded JSON document into an instance or raw graph."""
    if not isinstance(doc, dict):
        raise ParseError("instance document must be a JSON object", "$")
    n = _require(doc, "n", int, "'n'")
    depots = _require(doc, "depots", list, "'depots'")
    k = _require(doc, "k", int, "'k'")
    epsilon = float(_require(doc, "epsilon", float, "'epsilon'"))
    for i, d in enumerate(depots):
        if isinstance(d, bool) or not isinstance(d, int):
            raise ParseError(f"depot ids must be integers, got {d!r}", f"depots[{i}]")

    has_matrix, has_edges = "matrix" in doc, "edges" in doc
    if has_matrix == has_edges:
        raise ParseError("exactly one of 'matrix' or 'edges' is required", "matrix|edges")
    if has_matrix:
        rows = _require(doc, "matrix", list, "'matrix'")
        if len(rows) != n:
            raise ParseError(f"expected {n} rows, got {len(rows)}", "matrix")
        for i, row in enumerate(rows):
            if not isinstance(row, list) or len(row) != n:
                raise ParseError(f"row must hold {n} numbers", f"matrix[{i}]")
            for j, x in enumerate(row):
                if isinstance(x, bool) or not isinstance(x, (int, float)):
                    raise ParseError(f"expected a number, got {x!r}", f"matrix[{i}][{j}]")
        return MetricInstance(np.array(rows, dtype=np.float64).reshape(n, n), depots, k, epsilon)

    edges = _require(doc, "edges", list, "'edges'")
    parsed = []
    for i, e in enumerate(edges):
        ok = isinstance(e, list) and len(e) == 3
        ok = ok and all(not isinstance(x, bool) for x in e)
        ok = ok and isinstance(e[0], int) and isinstance(e[1], int) and isinstance(e[2], (int, float))
        if not ok:
            raise ParseError("edge must be [u, v, weight]", f"edges[{i}]")
        parsed.append((e[0], e[1], float(e[2])))
    return RawSiteGraph(n, tuple(parsed), tuple(depots), k, epsilon)


def _parse_matrix_text(text: str) -> MetricInstance:
    """Plain-text format: ``key value`` header lines then a ``matrix`` block.

    Example::

        n 3
        k 1
        epsilon 0.25
        depots 0
        matrix
        0 1 2
        1 0 1
        2 1 0
    """
    header: dict[str, tuple[int, list[str]]] = {}
    rows: list[list[float]] = []
    in_matrix = False
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if not in_matrix:
            if parts[0] == "matrix":
                in_matrix = True
                continue
            header[parts[0]] = (lineno, parts[1:])
            continue
        try:
            rows.append([float(x) for x in parts])
        except ValueError:
            raise ParseError("matrix row holds a non-number", f"line {lineno}") from None

    def scalar(key, conv):
        if key not in header:
            raise ParseError(f"missing '{key}' line", key)
        lineno, vals = header[key]
        try:
            return conv(vals[0]) if conv is not list else [int(v) for v in vals]
        except (ValueError, IndexError):
            raise ParseError(f"bad value for '{key}'", f"line {lineno}") from None

    n = scalar("n", int)
    k = scalar("k", int)
    eps = scalar("epsilon", float)
    depots = scalar("depots", list)
    if not in_matrix:
        raise ParseError("missing 'matrix' block", "matrix")
    if len(rows) != n or any(len(r) != n for r in rows):
        raise ParseError(f"matrix block must be {n}x{n}", "matrix")
    return MetricInstance(np.array(rows), depots, k, eps)


def load_instance(source, fmt: str = "json", *, close: bool = True, validate: bool = True):
    """Read an instance from bytes, text, a path-like or a binary/text stream.

    Edge-list documents are closed into a :class:`MetricInstance` unless
    ``close`` is false, in which case the :class:`RawSiteGraph` is returned.
    Invalid instances raise :class:`ValidationError` when ``validate`` is set.
    """
    if hasattr(source, "read"):
        data = source.read()
    elif isinstance(source, (bytes, bytearray)):
        data = bytes(source)
    elif isinstance(source, str) and (source.lstrip().startswith("{") or "\n" in source):
        data = source
    else:
        with open(source, "rb") as fh:
            data = fh.read()
    if isinstance(data, (bytes, bytearray)):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise ParseError(f"input is not UTF-8: {exc}", "$") from None

    if fmt == "json":
        try:
            doc = json.loads(data)
        except json.JSONDecodeError as exc:
            raise ParseError(exc.msg, f"line {exc.lineno}") from None
        obj = parse_instance_document(doc)
    elif fmt == "matrix":
        obj = _parse_matrix_text(data)
    else:
        raise ValueError(f"unknown format {fmt!r}")

    if isinstance(obj, RawSiteGraph):
        if not close:
            if validate:
                report = validate_raw(obj)
                if report:
                    raise ValidationError(report)
            return obj
        obj = close_instance(obj)
    if validate:
        report = validate_instance(obj)
        if report:
            raise ValidationError(report)
    return obj


def instance_to_document(inst: MetricInstance) -> dict:
    return {
        "n": inst.n,
        "depots": list(inst.depots),
        "k": inst.k,
        "epsilon": inst.epsilon,
        "matrix": inst.w.tolist(),
    }


def dump_instance(inst: MetricInstance, fp: io.TextIOBase | None = None) -> str:
    text = json.dumps(instance_to_document(inst), indent=1) + "\n"
    if fp is not None:
        fp.write(text)
    return text
