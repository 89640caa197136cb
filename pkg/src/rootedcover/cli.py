"""Command-line front end: ``rootedcover {solve,verify,bench,gen}``.

Exit codes: 0 success, 2 invalid instance or arguments, 3 unreadable or
malformed input, 4 approximation guarantee violated (``verify``), 5 instance
too large for the exact solver.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import dataclass
from pathlib import Path

from . import bench
from .cyclegen import cover_to_dot
from .errors import (
    DisconnectedGraph,
    InstanceTooLarge,
    NoFeasibleSolution,
    ParseError,
    ValidationError,
)
from .forest import build_rooted_spanning_forest, forest_to_dot
from .instance import dump_instance, load_instance
from .oracle import exact_solve
from .planner import default_parallelism, solution_to_json, solve, traces_to_csv

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_PARSE = 3
EXIT_GUARANTEE = 4
EXIT_TOO_LARGE = 5


@dataclass(frozen=True)
class RunConfig:
    command: str
    input: str | None = None
    output: str | None = None
    epsilon: float | None = None
    parallelism: int = 1
    emit_trace: bool = False
    emit_dot: bool = False
    seed: int = 0
    n: int | None = None
    m: int | None = None
    k: int | None = None
    sizes: tuple[int, ...] = bench.LADDER
    sweep_m: bool = False

    def __post_init__(self):
        if self.epsilon is not None and not 0 < self.epsilon < 1:
            raise ValueError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if self.parallelism < 1:
            raise ValueError(f"parallelism must be >= 1, got {self.parallelism}")


def _err(msg: str):
    print(f"rootedcover: {msg}", file=sys.stderr)


def _write(text: str, path: str | None):
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text)


def _side(cfg: RunConfig, suffix: str, text: str):
    """Debug artifacts go next to --output, or to stderr without one."""
    if cfg.output is None:
        sys.stderr.write(text)
    else:
        Path(cfg.output + suffix).write_text(text)


def _load(cfg: RunConfig):
    if cfg.input is None:
        raise ParseError("no input given", "--input")
    try:
        inst = load_instance(cfg.input if cfg.input != "-" else sys.stdin.buffer)
    except OSError as exc:
        raise ParseError(str(exc), cfg.input) from None
    if cfg.epsilon is not None:
        inst = inst.with_params(epsilon=cfg.epsilon)
    return inst


def cmd_solve(cfg: RunConfig) -> int:
    inst = _load(cfg)
    sol = solve(inst, parallelism=cfg.parallelism)
    _write(solution_to_json(sol), cfg.output)
    if cfg.emit_trace:
        _side(cfg, ".trace.csv", traces_to_csv(sol.traces))
    if cfg.emit_dot:
        _side(cfg, ".dot", cover_to_dot(sol.cover, inst))
        _side(cfg, ".forest.dot", forest_to_dot(build_rooted_spanning_forest(inst), inst))
    return EXIT_OK


def cmd_verify(cfg: RunConfig) -> int:
    inst = _load(cfg)
    exact = exact_solve(inst)
    sol = solve(inst, parallelism=cfg.parallelism)
    lam, obj = exact.lambda_star, sol.objective
    if lam > 0:
        ratio = obj / lam
    else:
        ratio = 1.0 if obj == 0 else math.inf
    report = {"lambda_star": lam, "alg_objective": obj, "ratio": ratio}
    _write(json.dumps(report, indent=1) + "\n", cfg.output)
    if obj > (5 + inst.epsilon) * lam:
        _err(f"guarantee violated: ratio {ratio:.6g} > {5 + inst.epsilon}")
        return EXIT_GUARANTEE
    return EXIT_OK


def cmd_bench(cfg: RunConfig) -> int:
    if cfg.sweep_m:
        n = cfg.n or 100
        rows = bench.run_m_sweep(n=n, k=cfg.k or 10, seed=cfg.seed)
        summary = {"per_unit_m_ratio": bench.per_unit_ratio(rows)}
    else:
        rows = bench.run_ladder(cfg.sizes, m=cfg.m or 3, k=cfg.k, seed=cfg.seed)
        summary = {}
        if len(rows) > 1:
            summary["loglog_slope"] = bench.loglog_slope([r.n for r in rows], [r.seconds for r in rows])
    _write(bench.rows_to_csv(rows, summary), cfg.output)
    return EXIT_OK


def cmd_gen(cfg: RunConfig) -> int:
    n = cfg.n if cfg.n is not None else 8
    m = cfg.m if cfg.m is not None else 1
    k = cfg.k if cfg.k is not None else m
    eps = cfg.epsilon if cfg.epsilon is not None else 0.25
    if not 1 <= m <= n:
        raise ValidationError([f"need 1 <= m <= n, got m = {m}, n = {n}"])
    if k < m:
        raise ValidationError([f"need k >= m, got k = {k}, m = {m}"])
    inst = bench.geometric_instance(n, m, k, eps, cfg.seed)
    _write(dump_instance(inst), cfg.output)
    return EXIT_OK


COMMANDS = {"solve": cmd_solve, "verify": cmd_verify, "bench": cmd_bench, "gen": cmd_gen}


def _sizes(text: str) -> tuple[int, ...]:
    return tuple(int(s) for s in text.split(",") if s)


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rootedcover", description="Rooted min-max cycle cover planner.")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, with_input=True):
        if with_input:
            sp.add_argument("input_pos", nargs="?", metavar="INPUT", help="instance JSON ('-' for stdin)")
            sp.add_argument("--input", "-i")
        sp.add_argument("--output", "-o")
        sp.add_argument("--epsilon", type=float)
        sp.add_argument("--parallelism", type=int, default=None)
        sp.add_argument("--seed", type=int, default=0)

    s = sub.add_parser("solve", help="approximate a cover and write the solution JSON")
    common(s)
    s.add_argument("--trace", action="store_true", help="also write the binary-search trace CSV")
    s.add_argument("--dot", action="store_true", help="also write Graphviz files for the cover and forest")

    v = sub.add_parser("verify", help="compare against the exact optimum")
    common(v)

    b = sub.add_parser("bench", help="time the solver on random geometric instances")
    common(b, with_input=False)
    b.add_argument("--n", type=int)
    b.add_argument("--m", type=int)
    b.add_argument("--k", type=int)
    b.add_argument("--sizes", type=_sizes, default=bench.LADDER)
    b.add_argument("--sweep-m", action="store_true", help="vary m from 1 to 5 at fixed n")

    g = sub.add_parser("gen", help="write a seeded random geometric instance")
    common(g, with_input=False)
    g.add_argument("--n", type=int)
    g.add_argument("--m", type=int)
    g.add_argument("--k", type=int)
    return p


def config_from_args(args: argparse.Namespace) -> RunConfig:
    par = args.parallelism if args.parallelism is not None else default_parallelism()
    return RunConfig(
        command=args.command,
        input=getattr(args, "input", None) or getattr(args, "input_pos", None),
        output=args.output,
        epsilon=args.epsilon,
        parallelism=par,
        emit_trace=getattr(args, "trace", False),
        emit_dot=getattr(args, "dot", False),
        seed=args.seed,
        n=getattr(args, "n", None),
        m=getattr(args, "m", None),
        k=getattr(args, "k", None),
        sizes=getattr(args, "sizes", bench.LADDER),
        sweep_m=getattr(args, "sweep_m", False),
    )


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
    except ValueError as exc:
        _err(str(exc))
        return EXIT_INVALID
    try:
        return COMMANDS[cfg.command](cfg)
    except ParseError as exc:
        _err(f"parse error: {exc}")
        return EXIT_PARSE
    except ValidationError as exc:
        for v in exc.report:
            _err(f"invalid: {v}")
        return EXIT_INVALID
    except (DisconnectedGraph, NoFeasibleSolution) as exc:
        _err(str(exc))
        return EXIT_INVALID
    except InstanceTooLarge as exc:
        _err(str(exc))
        return EXIT_TOO_LARGE


if __name__ == "__main__":
    sys.exit(main())
