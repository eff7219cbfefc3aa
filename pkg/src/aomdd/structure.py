"""Structural inputs to compilation: primal graphs, orderings, pseudo trees.

The pseudo tree generated for an ordering ``d`` is the bucket tree of
bucket elimination along ``d``: the first variable of each connected
component roots the component, and the residual components after
conditioning become child subtrees.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import StructuralError


@dataclass(frozen=True)
class PrimalGraph:
    """Undirected graph over variable ids 0..n-1, no self loops."""

    n: int
    adj: tuple  # tuple of frozensets

    def edges(self):
        return {(u, v) for u in range(self.n) for v in self.adj[u] if u < v}


def build_primal_graph(model):
    """Edge {u,v} iff some function scope contains both u and v."""
    adj = [set() for _ in range(model.n)]
    for f in model.functions:
        scope = f.scope
        for i, u in enumerate(scope):
            for v in scope[i + 1:]:
                adj[u].add(v)
                adj[v].add(u)
    return PrimalGraph(model.n, tuple(frozenset(s) for s in adj))


def min_fill_ordering(g, seed=0):
    """Greedy min-fill ordering; ties broken by seeded random choice.

    Vertices are eliminated in sequence and placed from the last
    position backwards, so the returned order is an elimination order
    when read back-to-front.
    """
    rng = random.Random(seed)
    adj = [set(s) for s in g.adj]
    remaining = set(range(g.n))
    order = [None] * g.n
    for pos in range(g.n - 1, -1, -1):
        best = None
        best_fill = None
        candidates = sorted(remaining)
        fills = {}
        for v in candidates:
            nbrs = [u for u in adj[v] if u in remaining]
            fill = 0
            for i, a in enumerate(nbrs):
                for b in nbrs[i + 1:]:
                    if b not in adj[a]:
                        fill += 1
            fills[v] = fill
        best_fill = min(fills.values())
        tied = [v for v in candidates if fills[v] == best_fill]
        best = rng.choice(tied)
        nbrs = [u for u in adj[best] if u in remaining]
        for i, a in enumerate(nbrs):
            for b in nbrs[i + 1:]:
                adj[a].add(b)
                adj[b].add(a)
        remaining.discard(best)
        order[pos] = best
    return order


def induced_width(g, order):
    """Width of the induced graph along ``order`` (clique-filling sweep)."""
    _check_permutation(g.n, order)
    pos = {v: i for i, v in enumerate(order)}
    adj = [set(s) for s in g.adj]
    width = 0
    for i in range(g.n - 1, -1, -1):
        v = order[i]
        earlier = [u for u in adj[v] if pos[u] < i]
        width = max(width, len(earlier))
        for j, a in enumerate(earlier):
            for b in earlier[j + 1:]:
                adj[a].add(b)
                adj[b].add(a)
    return width


def _check_permutation(n, order):
    if sorted(order) != list(range(n)):
        raise StructuralError("order is not a permutation of 0..%d" % (n - 1))


@dataclass(eq=False)
class PseudoTree:
    """Rooted tree over all variables with the backarc property.

    ``children`` lists follow the generating ordering; ``context`` holds
    per-variable ancestor lists ordered closest-first, or None when the
    tree was rebuilt without its primal graph (deserialized diagrams).
    """

    parent: tuple
    children: tuple
    root: int
    dfs_order: tuple
    dfs_index: tuple
    depth_of: tuple
    subtree_mask: tuple
    context: tuple = None

    @property
    def n(self):
        return len(self.parent)

    @property
    def height(self):
        return max(self.depth_of)

    def is_ancestor_or_self(self, a, b):
        """True iff ``a`` is ``b`` or an ancestor of ``b``."""
        return bool(self.subtree_mask[a] >> b & 1)

    def __eq__(self, other):
        if not isinstance(other, PseudoTree):
            return NotImplemented
        return self.parent == other.parent and self.dfs_order == other.dfs_order

    def ancestors(self, v):
        out = []
        p = self.parent[v]
        while p is not None:
            out.append(p)
            p = self.parent[p]
        return out

    def to_parent_text(self):
        """One-line parent-array form, root marked -1."""
        return " ".join("-1" if p is None else str(p) for p in self.parent) + "\n"

    def to_dot(self):
        lines = ["digraph pseudotree {"]
        for v in self.dfs_order:
            lines.append('  v%d [label="%d"];' % (v, v))
        for v in self.dfs_order:
            if self.parent[v] is not None:
                lines.append("  v%d -> v%d;" % (self.parent[v], v))
        lines.append("}")
        return "\n".join(lines) + "\n"


def _finish_tree(n, parent, children, root, g=None):
    dfs_order = []
    stack = [root]
    while stack:
        v = stack.pop()
        dfs_order.append(v)
        stack.extend(reversed(children[v]))
    dfs_index = [0] * n
    for i, v in enumerate(dfs_order):
        dfs_index[v] = i
    depth_of = [0] * n
    for v in dfs_order:
        if parent[v] is not None:
            depth_of[v] = depth_of[parent[v]] + 1
    mask = [0] * n
    for v in reversed(dfs_order):
        m = 1 << v
        for c in children[v]:
            m |= mask[c]
        mask[v] = m
    tree = PseudoTree(
        parent=tuple(parent),
        children=tuple(tuple(c) for c in children),
        root=root,
        dfs_order=tuple(dfs_order),
        dfs_index=tuple(dfs_index),
        depth_of=tuple(depth_of),
        subtree_mask=tuple(mask),
    )
    if g is not None:
        tree.context = compute_contexts(tree, g)
    return tree


def generate_pseudo_tree(g, order):
    """Pseudo tree for ``order`` by recursive conditioning.

    Disconnected primal graphs yield one tree: residual components of
    the removed root include any components the root never touched, so
    their roots simply attach below the globally first variable.
    """
    _check_permutation(g.n, order)
    pos = {v: i for i, v in enumerate(order)}
    parent = [None] * g.n
    children = [[] for _ in range(g.n)]
    root = min(range(g.n), key=pos.__getitem__)
    stack = [(frozenset(range(g.n)), None)]
    while stack:
        comp, par = stack.pop()
        r = min(comp, key=pos.__getitem__)
        parent[r] = par
        if par is not None:
            children[par].append(r)
        rest = comp - {r}
        comps = _components(g, rest)
        comps.sort(key=lambda c: min(pos[v] for v in c))
        for c in reversed(comps):
            stack.append((c, r))
    return _finish_tree(g.n, parent, children, root, g)


def _components(g, vertices):
    seen = set()
    comps = []
    for start in vertices:
        if start in seen:
            continue
        comp = {start}
        seen.add(start)
        frontier = [start]
        while frontier:
            v = frontier.pop()
            for u in g.adj[v]:
                if u in vertices and u not in seen:
                    seen.add(u)
                    comp.add(u)
                    frontier.append(u)
        comps.append(frozenset(comp))
    return comps


def chain_pseudo_tree(g, order):
    """Degenerate chain pseudo tree following ``order`` (MDD/OBDD mode)."""
    _check_permutation(g.n, order)
    parent = [None] * g.n
    children = [[] for _ in range(g.n)]
    for prev, v in zip(order, order[1:]):
        parent[v] = prev
        children[prev].append(v)
    return _finish_tree(g.n, parent, children, order[0], g)


def compute_contexts(tree, g):
    """Per-variable ancestor lists, closest ancestor first.

    An ancestor is in context(X) iff the primal graph connects it to X
    or to a descendant of X.
    """
    out = []
    for v in range(tree.n):
        sub = tree.subtree_mask[v]
        ctx = []
        for a in tree.ancestors(v):
            reach = 0
            for u in g.adj[a]:
                reach |= 1 << u
            if reach & sub:
                ctx.append(a)
        out.append(tuple(ctx))
    return tuple(out)


def compute_buckets(tree, model):
    """Function ids grouped by the deepest variable of their scope.

    Raises a structural error when some scope does not lie along a
    single root-to-leaf path of the tree.
    """
    buckets = [[] for _ in range(tree.n)]
    for fid, f in enumerate(model.functions):
        if not f.scope:
            continue
        deepest = max(f.scope, key=tree.depth_of.__getitem__)
        for v in f.scope:
            if not tree.is_ancestor_or_self(v, deepest):
                raise StructuralError(
                    "scope %r of function %d is not on a root-to-leaf path"
                    % (f.scope, fid)
                )
        buckets[deepest].append(fid)
    if tree.context is not None:
        for v in range(tree.n):
            allowed = {v, *tree.context[v]}
            for fid in buckets[v]:
                extra = set(model.functions[fid].scope) - allowed
                if extra:
                    raise StructuralError(
                        "bucket function %d reaches outside {%d} + context(%d)"
                        % (fid, v, v)
                    )
    return [tuple(b) for b in buckets]


def _parent_map(t):
    if isinstance(t, PseudoTree):
        return {v: t.parent[v] for v in range(t.n)}
    return dict(t)


def embed_check(t1, t2):
    """True iff the smaller tree is the larger tree restricted to its variables.

    Restriction deletes each missing node and reconnects its parent to
    its descendants (strict compatibility witness).  Accepts either
    PseudoTree instances or parent maps ``{var: parent-or-None}``.
    """
    m1, m2 = _parent_map(t1), _parent_map(t2)
    if len(m2) < len(m1):
        m1, m2 = m2, m1
    if not set(m1) <= set(m2):
        raise StructuralError("variable sets are not nested")
    keep = set(m1)
    restricted = {}
    for v in keep:
        p = m2[v]
        while p is not None and p not in keep:
            p = m2[p]
        restricted[v] = p
    return restricted == m1


def chain_parent_map(variables):
    """Parent map of the chain through ``variables`` in the given order."""
    out = {}
    prev = None
    for v in variables:
        out[v] = prev
        prev = v
    return out
