"""Command-line interface: compile, query, equiv, dot.

Exit codes: 0 success / 1 negative answer (equiv: not equivalent) /
2 usage, parse, or structural error / 3 resource cap exceeded.
"""

from __future__ import annotations

import argparse
import sys
import time

from .be_compiler import compile_be
from .diagram import count_stats, set_epsilon_digits, structural_equal, to_dot
from .errors import ParseError, ResourceLimitError, StructuralError
from .model import parse_dimacs_cnf, parse_uai, parse_uai_evidence
from .query import count_solutions, evaluate, mpe, sum_over
from .search_compiler import bcp_hook, compile_search
from .serialize import dumps, loads
from .structure import (
    build_primal_graph,
    chain_pseudo_tree,
    generate_pseudo_tree,
    induced_width,
    min_fill_ordering,
)


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="aomdd",
        description="Compile graphical models into canonical AND/OR "
        "multi-valued decision diagrams and query them.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    c = sub.add_parser("compile", help="compile a model file into a diagram")
    c.add_argument("input", help="model file (UAI network or DIMACS CNF)")
    c.add_argument("--format", choices=["uai", "cnf"], help="input format (default: by file extension)")
    c.add_argument("--method", choices=["search", "be"], default="search", help="compilation strategy")
    c.add_argument("--order", choices=["minfill"], default="minfill", help="ordering heuristic")
    c.add_argument("--order-file", help="file with an explicit variable ordering (whitespace-separated ids)")
    c.add_argument("--chain", action="store_true", help="force a chain pseudo tree (MDD/OBDD mode)")
    c.add_argument("--prune", choices=["none", "bcp"], default="none", help="pruning for the search method (ignored by be)")
    c.add_argument("--seed", type=int, default=0, help="seed for ordering tie-breaks")
    c.add_argument("--epsilon-digits", type=int, default=12, help="significant digits for float weight comparisons")
    c.add_argument("--mem-cap", type=int, help="abort after this many meta-nodes")
    c.add_argument("--out", help="write the canonical diagram file here")
    c.add_argument("--dot", help="write a DOT rendering here")
    c.add_argument("--stats", action="store_true", help="print a stats block")

    q = sub.add_parser("query", help="answer a query on a compiled diagram")
    q.add_argument("diagram", help="canonical diagram file")
    q.add_argument("--query", choices=["count", "sum", "mpe", "eval"], required=True)
    q.add_argument("--evidence", help="evidence file (count, then variable/value pairs)")
    q.add_argument("--assignment", help="full assignment file for eval (n whitespace-separated values)")
    q.add_argument("--precision", type=int, default=12, help="printed significant digits")
    q.add_argument("--exact", action="store_true", help="print exact rationals instead of decimals")

    e = sub.add_parser("equiv", help="decide equivalence of two diagram files")
    e.add_argument("a")
    e.add_argument("b")

    d = sub.add_parser("dot", help="render a diagram file as DOT")
    d.add_argument("diagram")
    d.add_argument("--out", help="output path (default stdout)")
    return parser


def _read(path):
    with open(path, "r", encoding="utf-8") as handle:
        return handle.read()


def _write(path, text):
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(text)


def _parse_model(args):
    fmt = args.format
    if fmt is None:
        fmt = "cnf" if args.input.endswith((".cnf", ".dimacs")) else "uai"
    text = _read(args.input)
    return parse_uai(text) if fmt == "uai" else parse_dimacs_cnf(text)


def _number_str(value, args):
    if getattr(args, "exact", False):
        return str(value)
    return "%.*g" % (args.precision, float(value))


def cmd_compile(args):
    model = _parse_model(args)
    set_epsilon_digits(args.epsilon_digits)
    g = build_primal_graph(model)
    if args.order_file:
        order = [int(tok) for tok in _read(args.order_file).split()]
    else:
        order = min_fill_ordering(g, seed=args.seed)
    tree = chain_pseudo_tree(g, order) if args.chain else generate_pseudo_tree(g, order)
    start = time.perf_counter()
    if args.method == "search":
        hook = bcp_hook(model) if args.prune == "bcp" else None
        compiled = compile_search(model, tree, hook=hook, node_cap=args.mem_cap)
    else:
        compiled = compile_be(model, d=order, tree=tree, node_cap=args.mem_cap)
    elapsed = time.perf_counter() - start
    if args.out:
        _write(args.out, dumps(compiled))
    if args.dot:
        _write(args.dot, to_dot(compiled))
    if args.stats:
        stats = count_stats(compiled)
        print("n %d" % model.n)
        print("k %d" % max(model.domains))
        print("induced_width %d" % induced_width(g, order))
        print("height %d" % tree.height)
        for v in tree.dfs_order:
            print("meta_nodes_var %d %d" % (v, stats["meta_nodes_per_var"].get(v, 0)))
        print("meta_nodes_total %d" % stats["total_meta_nodes"])
        print("edges %d" % stats["total_edges"])
        print("seconds %.6f" % elapsed)
        print("seed %d" % args.seed)
    return 0


def cmd_query(args):
    compiled = loads(_read(args.diagram))
    evidence = {}
    if args.evidence:
        evidence = parse_uai_evidence(_read(args.evidence), n=len(compiled.domains))
    if args.query == "count":
        print(count_solutions(compiled, evidence))
    elif args.query == "sum":
        print(_number_str(sum_over(compiled, evidence), args))
    elif args.query == "mpe":
        value, witness = mpe(compiled, evidence)
        print(_number_str(value, args))
        print(" ".join(str(v) for v in witness))
    else:
        if not args.assignment:
            raise StructuralError("eval requires --assignment")
        x = [int(tok) for tok in _read(args.assignment).split()]
        if len(x) != len(compiled.domains):
            raise StructuralError(
                "assignment has %d values, model has %d variables"
                % (len(x), len(compiled.domains))
            )
        print(_number_str(evaluate(compiled, x), args))
    return 0


def cmd_equiv(args):
    a = loads(_read(args.a))
    b = loads(_read(args.b))
    if structural_equal(a, b):
        print("equivalent")
        return 0
    print("not equivalent")
    return 1


def cmd_dot(args):
    text = to_dot(loads(_read(args.diagram)))
    if args.out:
        _write(args.out, text)
    else:
        sys.stdout.write(text)
    return 0


_COMMANDS = {
    "compile": cmd_compile,
    "query": cmd_query,
    "equiv": cmd_equiv,
    "dot": cmd_dot,
}


def main(argv=None):
    args = _build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except ResourceLimitError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 3
    except (ParseError, StructuralError, OSError, ValueError) as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
