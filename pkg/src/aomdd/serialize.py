"""Canonical text format for compiled diagrams.

Node records are emitted bottom-up in a content-determined order
(variables in reverse DFS order, nodes sorted by their arc signature),
with dense ids and exact rational weights, so two equal diagrams —
however they were compiled — serialize to byte-identical files.  That
makes file equality a valid fast path for the equivalence command.

Format (whitespace-separated ASCII, one record per line)::

    aomdd 1
    mode weighted|constraint
    vars <n>
    domains <k0> ... <kn-1>
    parents <p0> ... <pn-1>        # -1 marks the root
    dfs <v0> ... <vn-1>            # pseudo-tree DFS order
    nodes <m>
    n <id> <var> <w>:<children>... # children comma-separated ids or .
    roots <id>... | .
    constant <rational>
"""

from __future__ import annotations

from fractions import Fraction

from .diagram import Aomdd, UniqueTable, canonical_nodes, make_node
from .errors import ParseError, StructuralError
from .model import CONSTRAINT, WEIGHTED
from .structure import _finish_tree


def _weight_str(w):
    return str(Fraction(w))


def dumps(diagram):
    """Render a diagram to canonical text."""
    tree = diagram.tree
    out = ["aomdd 1"]
    out.append("mode %s" % (WEIGHTED if diagram.weighted else CONSTRAINT))
    out.append("vars %d" % len(diagram.domains))
    out.append("domains " + " ".join(str(k) for k in diagram.domains))
    out.append(
        "parents "
        + " ".join("-1" if p is None else str(p) for p in tree.parent)
    )
    out.append("dfs " + " ".join(str(v) for v in tree.dfs_order))
    ordered, ids = canonical_nodes(diagram)
    out.append("nodes %d" % len(ordered))
    for u in ordered:
        fields = ["n", str(ids[id(u)]), str(u.var)]
        for w, children in u.arcs:
            kids = ",".join(str(ids[id(c)]) for c in children) or "."
            fields.append("%s:%s" % (_weight_str(w), kids))
        out.append(" ".join(fields))
    if diagram.roots:
        out.append("roots " + " ".join(str(ids[id(r)]) for r in diagram.roots))
    else:
        out.append("roots .")
    out.append("constant %s" % _weight_str(diagram.constant))
    return "\n".join(out) + "\n"


def _expect(fields, lineno, tag, count=None):
    if not fields or fields[0] != tag:
        raise ParseError("expected %r record" % tag, lineno)
    if count is not None and len(fields) != count + 1:
        raise ParseError("%r record needs %d fields" % (tag, count), lineno)
    return fields[1:]


def loads(text):
    """Rebuild a diagram from canonical text.

    Nodes are re-interned through ``make_node`` into a fresh unique
    table; a record that does not survive reduction unchanged means the
    file was not canonical and is rejected.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    lines = [(i, l.split()) for i, l in enumerate(text.splitlines(), 1) if l.split()]
    it = iter(lines)

    def next_line(tag, count=None):
        try:
            lineno, fields = next(it)
        except StopIteration:
            raise ParseError("unexpected end of file, wanted %r" % tag)
        return lineno, _expect(fields, lineno, tag, count)

    lineno, header = next_line("aomdd", 1)
    if header[0] != "1":
        raise ParseError("unsupported version %r" % header[0], lineno)
    lineno, (mode,) = next_line("mode", 1)
    if mode not in (WEIGHTED, CONSTRAINT):
        raise ParseError("unknown mode %r" % mode, lineno)
    weighted = mode == WEIGHTED
    lineno, (nstr,) = next_line("vars", 1)
    n = int(nstr)
    lineno, doms = next_line("domains", n)
    domains = tuple(int(k) for k in doms)
    lineno, parents = next_line("parents", n)
    parent = [None if p == "-1" else int(p) for p in parents]
    lineno, dfs = next_line("dfs", n)
    dfs_order = [int(v) for v in dfs]
    if sorted(dfs_order) != list(range(n)) or parent.count(None) != 1:
        raise ParseError("malformed tree records", lineno)
    dfs_index = {v: i for i, v in enumerate(dfs_order)}
    children = [[] for _ in range(n)]
    root = None
    for v, p in enumerate(parent):
        if p is None:
            root = v
        else:
            children[p].append(v)
    for c in children:
        c.sort(key=dfs_index.__getitem__)
    tree = _finish_tree(n, parent, children, root)
    if tree.dfs_order != tuple(dfs_order):
        raise ParseError("dfs record inconsistent with parents", lineno)

    lineno, (mstr,) = next_line("nodes", 1)
    m = int(mstr)
    table = UniqueTable(weighted, domains=domains)
    by_id = {}

    def parse_weight(tok, lineno):
        try:
            w = Fraction(tok)
        except (ValueError, ZeroDivisionError):
            raise ParseError("bad weight %r" % tok, lineno)
        if not weighted:
            if w != 0 and w != 1:
                raise ParseError("constraint weight %r not 0/1" % tok, lineno)
            return int(w)
        return w

    for i in range(m):
        lineno, fields = next_line("n")
        if len(fields) < 3:
            raise ParseError("truncated node record", lineno)
        nid, var = int(fields[0]), int(fields[1])
        if nid != i:
            raise ParseError("node ids must be dense and in order", lineno)
        if not 0 <= var < n:
            raise ParseError("node variable %d out of range" % var, lineno)
        arcs = []
        for tok in fields[2:]:
            try:
                wtok, ktok = tok.split(":")
            except ValueError:
                raise ParseError("bad arc %r" % tok, lineno)
            w = parse_weight(wtok, lineno)
            if ktok == ".":
                kids = ()
            else:
                try:
                    kids = tuple(by_id[int(c)] for c in ktok.split(","))
                except (KeyError, ValueError):
                    raise ParseError("bad child list %r" % ktok, lineno)
            arcs.append((w, kids))
        const, nodes = make_node(var, arcs, table)
        if const != 1 or len(nodes) != 1 or nodes[0].arcs != tuple(arcs):
            raise StructuralError(
                "node %d is not in reduced canonical form" % nid
            )
        by_id[nid] = nodes[0]

    lineno, rtoks = next_line("roots")
    if rtoks == ["."]:
        roots = ()
    else:
        try:
            roots = tuple(by_id[int(r)] for r in rtoks)
        except (KeyError, ValueError):
            raise ParseError("bad root list", lineno)
    lineno, (ctok,) = next_line("constant", 1)
    constant = parse_weight(ctok, lineno)
    return Aomdd(tree, domains, roots, constant, table, weighted, None)
