"""Depth-first AND/OR search compilation with context caching.

The compiler expands the AND/OR search space along a pseudo tree,
caching each variable's subproblem by its context assignment, and
reduces meta-nodes inline on backtrack, so the trace it touches is (a
subset of, under pruning) the context-minimal graph and the output is
the canonical diagram.

A deferred-reduction variant first materializes the raw context-minimal
graph and then runs an explicit bottom-up reduction sweep; both paths
produce identical diagrams.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field

from ._recursion import run
from .diagram import Aomdd, UniqueTable, make_node
from .model import WEIGHTED
from .structure import (
    build_primal_graph,
    compute_buckets,
    compute_contexts,
    generate_pseudo_tree,
    min_fill_ordering,
)


@dataclass
class CompileStats:
    """Per-variable trace counters of one compilation."""

    or_expansions: Counter = field(default_factory=Counter)
    and_expansions: Counter = field(default_factory=Counter)
    cache_hits: Counter = field(default_factory=Counter)

    def report(self, tree, table):
        """Line-oriented counter dump, one line per variable in DFS order."""
        lines = ["var or_expansions and_expansions cache_hits meta_nodes"]
        for v in tree.dfs_order:
            lines.append(
                "%d %d %d %d %d"
                % (
                    v,
                    self.or_expansions[v],
                    self.and_expansions[v],
                    self.cache_hits[v],
                    table.created_per_var.get(v, 0),
                )
            )
        return "\n".join(lines) + "\n"


def _default_tree(model):
    g = build_primal_graph(model)
    return generate_pseudo_tree(g, min_fill_ordering(g))


def _contexts_of(tree, model):
    if tree.context is not None:
        return tree.context
    return compute_contexts(tree, build_primal_graph(model))


def arc_weight(model, tree, var, val, partial, buckets=None):
    """Product of the bucket(var) functions at partial + {var: val}.

    Every bucket scope lies inside {var} + context(var), so the value is
    fully determined by the context assignment; 1 for an empty bucket.
    """
    if buckets is None:
        buckets = compute_buckets(tree, model)
    saved = partial[var]
    partial[var] = val
    try:
        w = 1
        for fid in buckets[var]:
            w = w * model.functions[fid].value_at(partial)
            if w == 0:
                break
        return w
    finally:
        partial[var] = saved


def _constant_factor(model):
    c = 1
    for f in model.functions:
        if not f.scope:
            c = c * f.values[0]
    return c


def compile_search(model, tree=None, hook=None, table=None, node_cap=None):
    """Compile a model into its canonical diagram by AND/OR search.

    ``hook``, when given, is a sound pruning test called once per AND
    expansion with the current partial assignment (the expanded value
    already set); returning False turns the arc into a dead end.  A
    sound hook never changes the result, only the trace size.
    """
    if tree is None:
        tree = _default_tree(model)
    contexts = _contexts_of(tree, model)
    buckets = compute_buckets(tree, model)
    weighted = model.kind == WEIGHTED
    if table is None:
        table = UniqueTable(weighted, node_cap, model.domains)
    domains = model.domains
    functions = model.functions
    stats = CompileStats()
    caches = [dict() for _ in range(tree.n)]
    assignment = [None] * tree.n

    def solve(var):
        key = tuple(assignment[a] for a in contexts[var])
        cached = caches[var].get(key)
        if cached is not None:
            stats.cache_hits[var] += 1
            return cached
        stats.or_expansions[var] += 1
        arcs = []
        for val in range(domains[var]):
            assignment[var] = val
            w = 1
            for fid in buckets[var]:
                w = w * functions[fid].value_at(assignment)
                if w == 0:
                    break
            if w == 0 or (hook is not None and not hook(assignment)):
                arcs.append((0, ()))
                continue
            stats.and_expansions[var] += 1
            children = []
            for child in tree.children[var]:
                c_const, c_children = yield solve(child)
                if c_const == 0:
                    w = 0
                    break
                w = w * c_const
                children.extend(c_children)
            arcs.append((w, tuple(children)) if w != 0 else (0, ()))
        assignment[var] = None
        result = make_node(var, arcs, table)
        caches[var][key] = result
        return result

    const, children = run(solve(tree.root))
    constant = const * _constant_factor(model)
    if constant == 0:
        children = ()
    return Aomdd(tree, domains, tuple(children), constant, table, weighted, stats)


def compile_search_deferred(model, tree=None, table=None, node_cap=None):
    """Compile by tracing the raw context-minimal graph, then reducing.

    Equivalent to :func:`compile_search` (without a hook); kept as an
    explicit two-phase path so the inline-vs-deferred identity is
    testable.
    """
    if tree is None:
        tree = _default_tree(model)
    contexts = _contexts_of(tree, model)
    buckets = compute_buckets(tree, model)
    weighted = model.kind == WEIGHTED
    if table is None:
        table = UniqueTable(weighted, node_cap, model.domains)
    domains = model.domains
    functions = model.functions
    assignment = [None] * tree.n
    raw = {}

    def trace(var):
        key = (var, tuple(assignment[a] for a in contexts[var]))
        if key in raw:
            return key
        raw[key] = arcs = []
        for val in range(domains[var]):
            assignment[var] = val
            w = 1
            for fid in buckets[var]:
                w = w * functions[fid].value_at(assignment)
                if w == 0:
                    break
            if w == 0:
                arcs.append((0, ()))
                continue
            refs = []
            for child in tree.children[var]:
                refs.append((yield trace(child)))
            arcs.append((w, tuple(refs)))
        assignment[var] = None
        return key

    root_ref = run(trace(tree.root))

    reduced = {}
    by_var = {}
    for ref in raw:
        by_var.setdefault(ref[0], []).append(ref)
    for var in reversed(tree.dfs_order):
        for ref in by_var.get(var, ()):
            arcs = []
            for w, refs in raw[ref]:
                children = []
                for r in refs:
                    c_const, c_children = reduced[r]
                    if c_const == 0:
                        w = 0
                        break
                    w = w * c_const
                    children.extend(c_children)
                arcs.append((w, tuple(children)) if w != 0 else (0, ()))
            reduced[ref] = make_node(var, arcs, table)

    const, children = reduced[root_ref]
    constant = const * _constant_factor(model)
    if constant == 0:
        children = ()
    return Aomdd(tree, domains, tuple(children), constant, table, weighted, None)


def reduce_level(candidates, table):
    """Reduce one variable level of candidate meta-nodes.

    ``candidates`` is a list of ``(var, arcs)`` pairs whose children are
    already reduced; returns the list of ``(constant, children)``
    results.  Isomorphic candidates collapse to one interned node and
    redundant candidates dissolve into their promoted constant.
    """
    return [make_node(var, arcs, table) for var, arcs in candidates]


def model_nogoods(model):
    """The zero tuples of every function, as (var, value) nogood tuples."""
    nogoods = []
    for f in model.functions:
        for idx, value in enumerate(f.values):
            if value != 0:
                continue
            lits = []
            rem = idx
            for var, k in zip(reversed(f.scope), reversed(f.shape)):
                lits.append((var, rem % k))
                rem //= k
            nogoods.append(tuple(reversed(lits)))
    return nogoods


def bcp_hook(model):
    """Pruning hook performing multi-valued unit propagation.

    The clause set is the model's zero tuples read as nogoods.  A nogood
    with all literals matched is a conflict; a nogood with exactly one
    unassigned variable forbids that value, and a variable with a single
    remaining value is fixed and propagated further.  Sound by
    construction: it only reports dead ends that no extension can avoid.
    """
    nogoods = model_nogoods(model)
    domains = model.domains

    def hook(assignment):
        values = list(assignment)
        forbidden = {}
        changed = True
        while changed:
            changed = False
            for nogood in nogoods:
                pending = None
                live = True
                for var, val in nogood:
                    current = values[var]
                    if current is None:
                        if val in forbidden.get(var, ()):
                            live = False
                            break
                        if pending is None:
                            pending = (var, val)
                        else:
                            live = False
                            break
                    elif current != val:
                        live = False
                        break
                if not live:
                    continue
                if pending is None:
                    return False
                var, val = pending
                bad = forbidden.setdefault(var, set())
                if val not in bad:
                    bad.add(val)
                    changed = True
                    if len(bad) == domains[var]:
                        return False
                    if len(bad) == domains[var] - 1:
                        values[var] = next(
                            v for v in range(domains[var]) if v not in bad
                        )
        return True

    return hook
