"""Hash-consed meta-nodes and the two reduction rules.

A meta-node fuses one OR variable node with its k weighted AND value
arcs.  Each arc holds a weight and an ordered tuple of child meta-nodes,
at most one per pseudo-tree branch; an empty tuple stands for the
terminal 1 and a zero-weight arc (children forced empty) stands for an
arc into the terminal 0.

``make_node`` applies normalize -> redundancy check -> isomorphism
lookup inline, so any diagram built through it is completely reduced.
Weights are exact rationals, which makes reduction, equality and
serialization deterministic across compilation strategies.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import ResourceLimitError, StructuralError

#: Significand digits used by :func:`quantize` / :func:`weights_equal`.
DEFAULT_EPSILON_DIGITS = 12
_epsilon_digits = DEFAULT_EPSILON_DIGITS


def set_epsilon_digits(q):
    """Set the global precision used when comparing float weights."""
    global _epsilon_digits
    if q < 1:
        raise ValueError("epsilon digits must be >= 1")
    _epsilon_digits = q


def get_epsilon_digits():
    return _epsilon_digits


def quantize(x, digits=None):
    """Round a float to the configured number of significant digits."""
    if digits is None:
        digits = _epsilon_digits
    return float(("%." + str(digits) + "g") % float(x))


def weights_equal(a, b, digits=None):
    """Float weight comparison: equal after quantization.

    The core data structures carry exact rationals and compare exactly;
    this tolerance applies where floats enter (external inputs, printed
    output checks).
    """
    return quantize(a, digits) == quantize(b, digits)


class MetaNode:
    """One OR variable node plus its k weighted AND arcs (hash-consed)."""

    __slots__ = ("var", "arcs", "uid")

    def __init__(self, var, arcs, uid):
        self.var = var
        self.arcs = arcs
        self.uid = uid

    def __repr__(self):
        return "<MetaNode var=%d uid=%d>" % (self.var, self.uid)


class UniqueTable:
    """Per-compilation arena interning meta-nodes by (var, arcs) key."""

    def __init__(self, weighted, node_cap=None, domains=None):
        self.weighted = weighted
        self.node_cap = node_cap
        self.domains = domains
        self._table = {}
        self.created_per_var = {}

    def __len__(self):
        return len(self._table)

    def intern(self, var, arcs):
        key = (var, arcs)
        node = self._table.get(key)
        if node is None:
            if self.node_cap is not None and len(self._table) >= self.node_cap:
                raise ResourceLimitError(
                    "node cap %d exceeded after %d meta-nodes"
                    % (self.node_cap, len(self._table))
                )
            node = MetaNode(var, arcs, len(self._table))
            self._table[key] = node
            self.created_per_var[var] = self.created_per_var.get(var, 0) + 1
        return node

    def nodes_of(self, var):
        return [n for (v, _), n in self._table.items() if v == var]

    def all_nodes(self):
        return list(self._table.values())


def normalize_arcs(arcs):
    """Divide weights by their sum; return (normalized arcs, constant).

    An all-zero arc set signals the terminal 0: returns ``(None, 0)``.
    """
    total = sum(w for w, _ in arcs)
    if total == 0:
        return None, total
    out = tuple(
        (Fraction(w) / total, children) if w != 0 else (w * 0, ())
        for w, children in arcs
    )
    return out, total


def make_node(var, arcs, table):
    """Reduce-and-intern one candidate meta-node.

    ``arcs`` is a sequence of ``(weight, children)`` pairs, one per
    domain value, children hash-consed and sorted by pseudo-tree DFS
    order.  Returns ``(constant, children)``:

    - dead node: ``(0, ())``
    - redundant node: the common children with the promoted weight
    - otherwise: ``(s, (node,))`` where ``s`` is the normalization
      constant (1 in constraint mode).
    """
    arcs = tuple((w, tuple(ch)) if w != 0 else (w, ()) for w, ch in arcs)
    if table.domains is not None and len(arcs) != table.domains[var]:
        raise StructuralError(
            "variable %d has %d arcs, domain size is %d"
            % (var, len(arcs), table.domains[var])
        )
    if table.weighted:
        arcs, total = normalize_arcs(arcs)
        if arcs is None:
            return total, ()
    else:
        total = 1
        if all(w == 0 for w, _ in arcs):
            return 0, ()
    first = arcs[0]
    if all(a == first for a in arcs[1:]):
        return total * first[0], first[1]
    return total, (table.intern(var, arcs),)


@dataclass(eq=False)
class Aomdd:
    """A compiled diagram: root meta-nodes, root constant, owning tree.

    ``roots`` may hold several nodes when the root variable itself
    reduced away; an empty tuple is a terminal diagram (constant
    function).  ``constant`` is 0 exactly for the always-zero function.
    """

    tree: object
    domains: tuple
    roots: tuple
    constant: object
    table: UniqueTable
    weighted: bool
    stats: object = None

    @property
    def is_terminal(self):
        return not self.roots


def reachable_nodes(diagram):
    """All meta-nodes reachable from the roots, deduplicated."""
    seen = {}
    stack = list(diagram.roots)
    while stack:
        u = stack.pop()
        if id(u) in seen:
            continue
        seen[id(u)] = u
        for _, children in u.arcs:
            stack.extend(children)
    return list(seen.values())


def count_stats(diagram):
    """Node and edge counts of the reachable diagram.

    Every AND arc contributes ``max(1, len(children))`` edges: arcs with
    no live children point at a terminal.  Terminals are not counted as
    meta-nodes.
    """
    per_var = {}
    edges = 0
    for u in reachable_nodes(diagram):
        per_var[u.var] = per_var.get(u.var, 0) + 1
        for _, children in u.arcs:
            edges += max(1, len(children))
    return {
        "meta_nodes_per_var": per_var,
        "total_meta_nodes": sum(per_var.values()),
        "total_edges": edges,
    }


def structural_equal(a, b):
    """Exact diagram equality for two AOMDDs over the same pseudo tree.

    With a shared unique table this is root identity plus root-constant
    equality; across tables it is a memoized recursive isomorphism
    check.
    """
    if a.tree != b.tree or a.domains != b.domains:
        raise StructuralError("diagrams have different pseudo trees")
    if a.constant != b.constant:
        return False
    if a.table is b.table:
        return a.roots == b.roots
    if len(a.roots) != len(b.roots):
        return False
    memo = {}

    def iso(u, v):
        key = (id(u), id(v))
        cached = memo.get(key)
        if cached is not None:
            return cached
        ok = u.var == v.var and len(u.arcs) == len(v.arcs)
        if ok:
            for (wu, cu), (wv, cv) in zip(u.arcs, v.arcs):
                if wu != wv or len(cu) != len(cv):
                    ok = False
                    break
                if not all(iso(x, y) for x, y in zip(cu, cv)):
                    ok = False
                    break
        memo[key] = ok
        return ok

    return all(iso(u, v) for u, v in zip(a.roots, b.roots))


def normalized_root_sum(diagram):
    """Sum-traversal of the root nodes with unit don't-care factors.

    For a normalized weighted diagram every meta-node's weights sum to
    1, so this evaluates to exactly 1; exposed as a numeric sanity
    check.
    """
    memo = {}
    order = sorted(
        reachable_nodes(diagram), key=lambda u: -diagram.tree.dfs_index[u.var]
    )
    for u in order:
        total = 0
        for w, children in u.arcs:
            term = w
            for c in children:
                term *= memo[id(c)]
            total += term
        memo[id(u)] = total
    result = diagram.constant * 0 + 1
    for r in diagram.roots:
        result *= memo[id(r)]
    return result


def check_reduced(table):
    """Assert the unique-table invariants: no isomorphic pair, no redundant node.

    Isomorphism freedom is structural (the table is keyed by the full
    arc tuple); redundancy freedom is re-checked per node.
    """
    for node in table.all_nodes():
        first = node.arcs[0]
        if all(a == first for a in node.arcs[1:]):
            raise AssertionError("redundant meta-node survived: %r" % node)
        if table.weighted:
            total = sum(w for w, _ in node.arcs)
            if total != 1:
                raise AssertionError("weights of %r sum to %s" % (node, total))
        for w, children in node.arcs:
            if w == 0 and children:
                raise AssertionError("zero-weight arc with children on %r" % node)
    return True


def canonical_nodes(diagram):
    """Reachable nodes in canonical emission order, plus their dense ids.

    Variables are visited bottom-up (reverse DFS); within a variable,
    nodes sort by their arc signature with child ids already assigned,
    so equal diagrams enumerate identically regardless of creation
    order.
    """
    by_var = {}
    for u in reachable_nodes(diagram):
        by_var.setdefault(u.var, []).append(u)
    ids = {}
    ordered = []
    for var in reversed(diagram.tree.dfs_order):
        nodes = by_var.get(var, [])
        keyed = []
        for u in nodes:
            sig = tuple(
                (str(w), tuple(ids[id(c)] for c in ch)) for w, ch in u.arcs
            )
            keyed.append((sig, u))
        keyed.sort(key=lambda p: p[0])
        for _, u in keyed:
            ids[id(u)] = len(ordered)
            ordered.append(u)
    return ordered, ids


def to_dot(diagram):
    """DOT rendering: record nodes with one port per value, square terminals."""
    ordered, ids = canonical_nodes(diagram)
    lines = ["digraph aomdd {", "  node [shape=record];"]
    used_t0 = used_t1 = False
    arrows = []
    for u in ordered:
        i = ids[id(u)]
        ports = " | ".join(
            "<p%d> %d: %s" % (j, j, w) for j, (w, _) in enumerate(u.arcs)
        )
        lines.append('  n%d [label="{X%d | { %s }}"];' % (i, u.var, ports))
        for j, (w, children) in enumerate(u.arcs):
            if w == 0:
                arrows.append("  n%d:p%d -> t0;" % (i, j))
                used_t0 = True
            elif not children:
                arrows.append("  n%d:p%d -> t1;" % (i, j))
                used_t1 = True
            else:
                for c in children:
                    arrows.append("  n%d:p%d -> n%d;" % (i, j, ids[id(c)]))
    if not diagram.roots:
        if diagram.constant == 0:
            used_t0 = True
        else:
            used_t1 = True
    if used_t0:
        lines.append('  t0 [shape=square, label="0"];')
    if used_t1:
        lines.append('  t1 [shape=square, label="1"];')
    lines.extend(arrows)
    lines.append('  label="root constant %s";' % diagram.constant)
    lines.append("}")
    return "\n".join(lines) + "\n"
