"""Command-line interface: ``gspmixdom <command> ...``.

Exit codes: 0 success, 1 bad input, 2 oracle size limit, 3 not reducible.
"""

from __future__ import annotations

import argparse
import gc
import json
import os
import sys
import time

from .dp import solve
from .expr import ParseError, format_expr, parse_expr
from .instances import Disconnected, NotReducible, decompose, generate
from .model import Solution, TreeError, Vertex
from .oracle import SizeLimitExceeded, brute_force, undominated
from .realize import Multigraph, parse_edge_list, realize, to_dot, to_edge_list

if hasattr(sys, "set_int_max_str_digits"):
    sys.set_int_max_str_digits(0)


class InputError(Exception):
    pass


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None


def _looks_like_expr(path: str, text: str) -> bool:
    if path.endswith(".gsp"):
        return True
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            return "(" in line
    return False


def _load_tree(path: str):
    text = _read(path)
    try:
        return parse_expr(text)
    except ParseError as exc:
        raise InputError(f"{path}:{exc.diagnostic}") from None


def _terminal_header(text: str):
    for line in text.splitlines():
        parts = line.strip().lstrip("#").split()
        if line.strip().startswith("#") and len(parts) == 3 and parts[0] == "terminals":
            return parts[1], parts[2]
    return None


def _load_graph(path: str) -> Multigraph:
    """A .gsp expression or an edge list, realized as a multigraph."""
    text = _read(path)
    if _looks_like_expr(path, text):
        return realize(_load_tree(path))
    try:
        pairs = parse_edge_list(text)
    except ValueError as exc:
        raise InputError(f"{path}: {exc}") from None
    if not pairs:
        raise InputError(f"{path}: no edges")
    return Multigraph.from_edges(pairs, _terminal_header(text))


def _report(sol: Solution, args, out) -> None:
    if args.json:
        json.dump(sol.to_json(), out)
        out.write("\n")
        return
    out.write(f"gamma_m: {sol.gamma_m}\n")
    if args.count:
        out.write(f"count: {sol.count}\n")
    if args.witness:
        out.write("witness: " + " ".join(str(e) for e in sol.sorted_witness()) + "\n")


def cmd_solve(args, out) -> int:
    tree = _load_tree(args.path)
    _report(solve(tree, engine=args.engine), args, out)
    return 0


def cmd_oracle(args, out) -> int:
    graph = _load_graph(args.path)
    try:
        gamma, count, witness = brute_force(graph, force=args.force)
    except SizeLimitExceeded as exc:
        print(f"gspmixdom: {exc}; pass --force to run anyway", file=sys.stderr)
        return 2
    args.count = args.witness = True
    _report(Solution(gamma, count, witness), args, out)
    return 0


def parse_set(text: str, graph: Multigraph) -> set:
    chosen = set()
    for item in filter(None, (s.strip() for s in text.split(","))):
        tag, _, value = item.partition(":")
        if tag == "v" and value in graph.incidence:
            chosen.add(Vertex(value))
        elif tag == "e" and value.isdigit() and int(value) < len(graph.edges):
            chosen.add(graph.edges[int(value)])
        else:
            raise InputError(f"unknown element {item!r}")
    return chosen


def cmd_check(args, out) -> int:
    graph = _load_graph(args.path)
    chosen = parse_set(args.set, graph)
    missed = undominated(graph, chosen)
    if args.json:
        json.dump(
            {"dominating": not missed, "undominated": [str(e) for e in missed[:1]]}, out
        )
        out.write("\n")
    elif missed:
        out.write(f"false\nundominated: {missed[0]}\n")
    else:
        out.write("true\n")
    return 0


def _default_seed() -> int:
    raw = os.environ.get("GSPMIXDOM_SEED")
    if raw is None:
        return 0
    try:
        return int(raw, 0)
    except ValueError:
        raise InputError(f"GSPMIXDOM_SEED is not an integer: {raw!r}") from None


def _weights(text: str):
    try:
        return tuple(float(x) for x in text.split(","))
    except ValueError:
        raise InputError(f"bad --weights {text!r}") from None


def cmd_gen(args, out) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    if args.leaves < 1:
        raise InputError("--leaves must be >= 1")
    try:
        tree = generate(seed, args.leaves, _weights(args.weights))
    except ValueError as exc:
        raise InputError(str(exc)) from None
    out.write(format_expr(tree) + "\n")
    return 0


def cmd_decompose(args, out) -> int:
    text = _read(args.path)
    try:
        pairs = parse_edge_list(text)
    except ValueError as exc:
        raise InputError(f"{args.path}: {exc}") from None
    if args.terminals:
        terms = tuple(x.strip() for x in args.terminals.split(","))
        if len(terms) != 2:
            raise InputError("--terminals takes two names: s,t")
        candidates = [terms]
    elif args.search:
        names = sorted({x for p in pairs for x in p})
        candidates = [(a, b) for a in names for b in names if a != b]
    else:
        header = _terminal_header(text)
        if header is None:
            raise InputError("no terminals: pass --terminals s,t or --search")
        candidates = [header]
    last = None
    for terms in candidates:
        try:
            tree = decompose(pairs, terms)
        except NotReducible as exc:
            last = exc
            continue
        except (Disconnected, ValueError) as exc:
            raise InputError(str(exc)) from None
        out.write(format_expr(tree) + "\n")
        return 0
    print(f"gspmixdom: not reducible: {last}", file=sys.stderr)
    return 3


def _sizes(text: str):
    try:
        sizes = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise InputError(f"bad --sizes {text!r}") from None
    if not sizes or min(sizes) < 1:
        raise InputError("--sizes needs positive leaf counts")
    return sizes


def bench(sizes, seed: int, repeat: int = 3, engine: str = "auto"):
    """Time ``solve`` on generated trees; rows of (leaves, seconds, ratio).

    Each size is timed ``repeat`` times and the fastest run is kept. The
    collector is paused while timing so full passes over the tree do not land
    inside the measurement.
    """
    solve(generate(seed, 8), engine=engine)  # compile outside the timings
    rows = []
    prev = None
    for n in sizes:
        tree = generate(seed, n)
        best = None
        for _ in range(max(1, repeat)):
            gc.collect()
            gc.disable()
            try:
                t0 = time.perf_counter()
                solve(tree, engine=engine)
                dt = time.perf_counter() - t0
            finally:
                gc.enable()
            best = dt if best is None else min(best, dt)
        rows.append((n, best, None if prev is None else best / prev))
        prev = best
    return rows


def cmd_bench(args, out) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    rows = bench(_sizes(args.sizes), seed, args.repeat, args.engine)
    out.write(f"{'leaves':>10} {'seconds':>10} {'us/leaf':>10} {'ratio':>8}\n")
    for n, dt, ratio in rows:
        r = "-" if ratio is None else f"{ratio:.2f}"
        out.write(f"{n:>10} {dt:>10.3f} {dt / n * 1e6:>10.3f} {r:>8}\n")
    return 0


def cmd_export(args, out) -> int:
    graph = _load_graph(args.path)
    out.write(to_dot(graph) if args.format == "dot" else to_edge_list(graph))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="gspmixdom",
        description="Minimum mixed dominating sets of generalized series-parallel graphs.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def output_flags(sp):
        sp.add_argument("--json", action="store_true", help="JSON on stdout")
        sp.add_argument("--witness", action="store_true", help="print one minimum set")
        sp.add_argument("--count", action="store_true", help="print the number of minimum sets")

    sp = sub.add_parser("solve", help="solve a .gsp expression file")
    sp.add_argument("path")
    output_flags(sp)
    sp.add_argument("--engine", choices=("auto", "python", "numba"), default="auto")
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("oracle", help="brute force on a .gsp or edge-list file")
    sp.add_argument("path")
    sp.add_argument("--force", action="store_true", help="ignore the 24-element limit")
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("check", help="test whether a set is mixed dominating")
    sp.add_argument("path")
    sp.add_argument("--set", required=True, help='elements, e.g. "v:a,e:0"')
    sp.add_argument("--json", action="store_true")
    sp.set_defaults(func=cmd_check)

    sp = sub.add_parser("gen", help="print a random parse tree")
    sp.add_argument("--seed", type=lambda s: int(s, 0), default=None)
    sp.add_argument("--leaves", type=int, required=True)
    sp.add_argument("--weights", default="1,1,1", help="series,parallel,g-series")
    sp.set_defaults(func=cmd_gen)

    sp = sub.add_parser("decompose", help="edge list to expression")
    sp.add_argument("path")
    sp.add_argument("--terminals", help="s,t")
    sp.add_argument("--search", action="store_true", help="try every terminal pair")
    sp.set_defaults(func=cmd_decompose)

    sp = sub.add_parser("bench", help="time solve on generated trees")
    sp.add_argument("--sizes", default="100000,200000,400000")
    sp.add_argument("--seed", type=lambda s: int(s, 0), default=None)
    sp.add_argument("--repeat", type=int, default=3)
    sp.add_argument("--engine", choices=("auto", "python", "numba"), default="auto")
    sp.set_defaults(func=cmd_bench)

    sp = sub.add_parser("export", help="print the realized graph")
    sp.add_argument("path")
    sp.add_argument("--format", choices=("edges", "dot"), default="edges")
    sp.set_defaults(func=cmd_export)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code else 0
    try:
        return args.func(args, out)
    except (InputError, TreeError) as exc:
        print(f"gspmixdom: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
