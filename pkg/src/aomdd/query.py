"""Queries over a compiled diagram: eval, sum, count, MPE, enumeration.

Redundancy removal deletes don't-care variables from paths, so the
traversals here must account for the variables an arc skips: summation
multiplies a domain-size factor per skipped unobserved variable, while
evaluation and maximization multiply 1.  The skipped set of an arc is

    uncovered(u, i) = subtree(var(u)) - {var(u)} - union of subtree(c)
                      for c in children_i

and, above the roots, every variable outside all root subtrees.
"""

from __future__ import annotations

from .diagram import reachable_nodes, structural_equal
from .errors import StructuralError


def _check_evidence(diagram, evidence):
    evidence = dict(evidence or {})
    for var, val in evidence.items():
        if not 0 <= var < len(diagram.domains):
            raise StructuralError("evidence variable %d unknown" % var)
        if not 0 <= val < diagram.domains[var]:
            raise StructuralError(
                "evidence value %d out of domain of variable %d" % (val, var)
            )
    return evidence


def _uncovered_mask(diagram, node, children):
    mask = diagram.tree.subtree_mask[node.var] & ~(1 << node.var)
    for c in children:
        mask &= ~diagram.tree.subtree_mask[c.var]
    return mask


def _root_uncovered_mask(diagram):
    mask = (1 << len(diagram.domains)) - 1
    for r in diagram.roots:
        mask &= ~diagram.tree.subtree_mask[r.var]
    return mask


def _mask_vars(mask):
    out = []
    v = 0
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return out


def evaluate(diagram, x):
    """Value of the compiled function at a full assignment.

    Root constant times the product of arc weights along the unique
    solution-tree read of ``x``; skipped variables contribute factor 1.
    """
    for var, k in enumerate(diagram.domains):
        if x[var] is None or not 0 <= x[var] < k:
            raise ValueError("variable %d unassigned or out of domain" % var)
    result = diagram.constant
    stack = list(diagram.roots)
    while stack:
        u = stack.pop()
        w, children = u.arcs[x[u.var]]
        if w == 0:
            return w
        result = result * w
        stack.extend(children)
    return result


def _bottom_up(diagram):
    return sorted(
        reachable_nodes(diagram), key=lambda u: -diagram.tree.dfs_index[u.var]
    )


def _sum_traversal(diagram, evidence, weight_of):
    """Memoized sum over e-consistent assignments with don't-care factors."""
    domains = diagram.domains
    memo = {}
    for u in _bottom_up(diagram):
        total = 0
        fixed = evidence.get(u.var)
        for val, (w, children) in enumerate(u.arcs):
            if fixed is not None and val != fixed:
                continue
            w = weight_of(w)
            if w == 0:
                continue
            term = w
            for c in children:
                term = term * memo[id(c)]
            for v in _mask_vars(_uncovered_mask(diagram, u, children)):
                if v not in evidence:
                    term = term * domains[v]
            total = total + term
        memo[id(u)] = total
    result = 1
    for r in diagram.roots:
        result = result * memo[id(r)]
    for v in _mask_vars(_root_uncovered_mask(diagram)):
        if v not in evidence:
            result = result * domains[v]
    return result


def sum_over(diagram, evidence=None):
    """Sum of the function over all full assignments consistent with evidence."""
    evidence = _check_evidence(diagram, evidence)
    return diagram.constant * _sum_traversal(diagram, evidence, lambda w: w)


def count_solutions(diagram, evidence=None):
    """Exact count of evidence-consistent assignments with nonzero value."""
    evidence = _check_evidence(diagram, evidence)
    if diagram.constant == 0:
        return 0
    return _sum_traversal(diagram, evidence, lambda w: 0 if w == 0 else 1)


def mpe(diagram, evidence=None):
    """Highest evidence-consistent value and a witness attaining it.

    Don't-care variables contribute factor 1 and take value 0 in the
    witness (evidence values when observed); ``evaluate`` at the witness
    reproduces the value exactly.
    """
    evidence = _check_evidence(diagram, evidence)
    domains = diagram.domains
    best = {}
    best_val = {}
    for u in _bottom_up(diagram):
        top = None
        top_val = 0
        fixed = evidence.get(u.var)
        for val, (w, children) in enumerate(u.arcs):
            if fixed is not None and val != fixed:
                continue
            term = w
            for c in children:
                term = term * best[id(c)]
            if top is None or term > top:
                top = term
                top_val = val
        best[id(u)] = 0 if top is None else top
        best_val[id(u)] = top_val

    value = diagram.constant
    for r in diagram.roots:
        value = value * best[id(r)]

    witness = [None] * len(domains)
    stack = list(diagram.roots)
    while stack:
        u = stack.pop()
        val = best_val[id(u)]
        witness[u.var] = val
        stack.extend(u.arcs[val][1])
    for var in range(len(domains)):
        if witness[var] is None:
            witness[var] = evidence.get(var, 0)
    return value, witness


def enumerate_solutions(diagram, limit=None, evidence=None):
    """Yield up to ``limit`` nonzero-value assignments as (assignment, value).

    Deterministic DFS order: value index ascending, pseudo-tree branch
    order, with skipped variables expanded over their full domains in
    DFS position.
    """
    evidence = _check_evidence(diagram, evidence)
    domains = diagram.domains
    tree = diagram.tree
    if diagram.constant == 0:
        return

    def var_factory(v):
        def gen():
            fixed = evidence.get(v)
            for val in range(domains[v]):
                if fixed is not None and val != fixed:
                    continue
                yield 1, ((v, val),)

        return gen

    def node_factory(u):
        def gen():
            fixed = evidence.get(u.var)
            for val, (w, children) in enumerate(u.arcs):
                if fixed is not None and val != fixed:
                    continue
                if w == 0:
                    continue
                parts = [(tree.dfs_index[c.var], node_factory(c)) for c in children]
                for v in _mask_vars(_uncovered_mask(diagram, u, children)):
                    parts.append((tree.dfs_index[v], var_factory(v)))
                parts.sort(key=lambda p: p[0])
                for w2, pairs in _cross([p[1] for p in parts]):
                    yield w * w2, ((u.var, val),) + pairs

        return gen

    def _cross(factories):
        if not factories:
            yield 1, ()
            return
        for w1, p1 in factories[0]():
            for w2, p2 in _cross(factories[1:]):
                yield w1 * w2, p1 + p2

    parts = [(tree.dfs_index[r.var], node_factory(r)) for r in diagram.roots]
    for v in _mask_vars(_root_uncovered_mask(diagram)):
        parts.append((tree.dfs_index[v], var_factory(v)))
    parts.sort(key=lambda p: p[0])

    emitted = 0
    for w, pairs in _cross([p[1] for p in parts]):
        if limit is not None and emitted >= limit:
            return
        assignment = [None] * len(domains)
        for var, val in pairs:
            assignment[var] = val
        yield assignment, diagram.constant * w
        emitted += 1


def equivalent(a, b):
    """Equality of the represented functions via canonical-form identity."""
    return structural_equal(a, b)
