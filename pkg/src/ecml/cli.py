"""Command-line entry point: ``ecml count|decide|solve|generate|problems``.

Results go to stdout, diagnostics to stderr.  Exit status is 0 on success
(a NO answer is still a success), 2 for usage and input errors and 3 when a
work budget runs out.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import time
from pathlib import Path

from .cutcount import DEFAULT_TARGET_ERROR, Decider, default_workers
from .decomposition import (
    format_td,
    greedy_decomposition,
    make_nice,
    parse_td,
    validate_decomposition,
)
from .dp import count_solutions, enumerate_branches
from .dsl import parse_problem
from .graph import bind_instance, format_graph, parse_graph
from .hardness import generate, parse_dimacs
from .oracle import DEFAULT_BUDGET, BudgetExceeded, brute_force_count
from .problems import NAMES, make_problem

EXIT_USAGE = 2
EXIT_BUDGET = 3


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def load_graph(path: str, fmt: str = "auto"):
    text = _read(path)
    if fmt == "auto":
        first = next((ln.split() for ln in text.splitlines() if ln.strip() and not ln.startswith("c")), [])
        fmt = "pace-gr" if first[:1] == ["p"] else "edge-list"
    try:
        return parse_graph(text, fmt)
    except ValueError as exc:
        raise UsageError(f"{path}: {exc}") from None


def load_problem(ref: str):
    if os.path.exists(ref):
        try:
            return parse_problem(_read(ref))
        except ValueError as exc:
            raise UsageError(f"{ref}: {exc}") from None
    try:
        return make_problem(ref)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def load_bindings(path: str | None, params: list[str]) -> dict:
    data: dict = {}
    if path:
        try:
            data = json.loads(_read(path))
        except json.JSONDecodeError as exc:
            raise UsageError(f"{path}: line {exc.lineno}: {exc.msg}") from None
        if not isinstance(data, dict):
            raise UsageError(f"{path}: expected a JSON object")
    data.setdefault("params", {})
    for item in params:
        name, sep, value = item.partition("=")
        try:
            data["params"][name.strip()] = int(value)
        except ValueError:
            sep = ""
        if not sep:
            raise UsageError(f"--param expects NAME=INT, got {item!r}")
    return data


def _prepare(args):
    graph = load_graph(args.graph, args.format)
    spec = load_problem(args.problem)
    try:
        instance = bind_instance(graph, spec, load_bindings(args.bindings, args.param))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if args.td:
        try:
            td = parse_td(_read(args.td))
        except ValueError as exc:
            raise UsageError(f"{args.td}: {exc}") from None
        report = validate_decomposition(graph, td)
        if not report.valid:
            raise UsageError(f"{args.td}: invalid decomposition: "
                             + "; ".join(f"{v.kind} {v.detail}" for v in report.violations))
    else:
        td = greedy_decomposition(graph)
        print(f"heuristic decomposition, width {td.width}", file=sys.stderr)
    try:
        return instance, spec, td, make_nice(graph, td)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _emit(args, payload: dict) -> None:
    if args.json:
        print(json.dumps(payload, sort_keys=True))
    else:
        for key in sorted(payload):
            print(f"{key}: {payload[key]}")


def cmd_count(args) -> int:
    start = time.perf_counter()
    instance, spec, td, nice = _prepare(args)
    branches = len(enumerate_branches(instance, spec))
    if spec.has_connectivity:
        print("connectivity constraint present: counting by exhaustive enumeration", file=sys.stderr)
        count = brute_force_count(instance, spec, budget=args.budget)
    else:
        count = count_solutions(instance, nice, spec)
    _emit(args, {"count": count, "width_used": td.width, "branches": branches,
                 "wall_time": round(time.perf_counter() - start, 6)})
    return 0


def cmd_decide(args) -> int:
    if not 0 < args.target_error < 1:
        raise UsageError("--target-error must lie strictly between 0 and 1")
    instance, spec, td, nice = _prepare(args)
    workers = args.workers if args.workers is not None else default_workers()
    result = Decider(instance, nice, spec).decide(args.seed, args.target_error, max(1, workers))
    payload = json.loads(result.to_json())
    payload["width_used"] = td.width
    _emit(args, payload)
    return 0


def cmd_generate(args) -> int:
    try:
        cnf = parse_dimacs(_read(args.cnf))
    except ValueError as exc:
        raise UsageError(f"{args.cnf}: {exc}") from None
    try:
        inst = generate(cnf, args.l)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    out = Path(args.out) if args.out else Path(args.cnf).with_suffix("")
    paths = {"graph": f"{out}.gr", "td": f"{out}.td", "index": f"{out}.json"}
    Path(paths["graph"]).write_text(format_graph(inst.graph))
    Path(paths["td"]).write_text(format_td(inst.decomposition, inst.graph.n))
    Path(paths["index"]).write_text(inst.to_json() + "\n")
    _emit(args, {"k": inst.k, "l": inst.l, "vertices": inst.graph.n, "edges": inst.graph.m,
                 "width": inst.decomposition.width, "files": paths})
    return 0


def cmd_problems(args) -> int:
    for name in NAMES:
        print(name)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ecml", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def instance_args(p):
        p.add_argument("--graph", required=True, help="graph file (.gr or edge list)")
        p.add_argument("--format", default="auto", choices=["auto", "pace-gr", "edge-list"])
        p.add_argument("--td", help="tree decomposition (.td); greedy min-fill if omitted")
        p.add_argument("--problem", required=True, help="catalogue name or problem file")
        p.add_argument("--bindings", help="JSON with params and fixed sets")
        p.add_argument("--param", "-p", action="append", default=[], metavar="NAME=INT",
                       help="set a parameter (overrides --bindings)")
        p.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                       help="assignment limit for exhaustive counting")
        p.add_argument("--json", action="store_true", help="print one JSON object")

    p = sub.add_parser("count", help="exact number of solutions")
    instance_args(p)
    p.set_defaults(func=cmd_count)

    for name in ("decide", "solve"):
        p = sub.add_parser(name, help="randomized decision (YES answers are certain)")
        instance_args(p)
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--target-error", type=float, default=DEFAULT_TARGET_ERROR)
        p.add_argument("--workers", type=int, default=None,
                       help="parallel trials (default: available CPUs)")
        p.set_defaults(func=cmd_decide)

    p = sub.add_parser("generate", help="3CNF to short-cycle deletion instance")
    p.add_argument("cnf", help="DIMACS CNF file")
    p.add_argument("--l", type=int, default=5, help="cycle length, at least 5")
    p.add_argument("--out", help="output prefix (default: CNF path without suffix)")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("problems", help="list catalogue problems")
    p.set_defaults(func=cmd_problems)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET


if __name__ == "__main__":
    sys.exit(main())
