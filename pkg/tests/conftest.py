"""Shared fixtures: worked example, 4-queens, random model generators."""

import math
import random
from fractions import Fraction

import pytest

from aomdd import (
    build_primal_graph,
    generate_pseudo_tree,
    make_model,
    parse_dimacs_cnf,
)

# The 8-variable 9-clause network used throughout: variables A..H are
# ids 0..7 and the clauses are
#   F|H, A|~H, A xor B xor G, F|G, B|F, A|E, C|E, C xor D, B|C.
EXAMPLE_CNF = """\
c A=1 B=2 C=3 D=4 E=5 F=6 G=7 H=8
p cnf 8 9
6 8 0
1 -8 0
1 2 7 0
-1 -2 7 0
-1 2 -7 0
1 -2 -7 0
6 7 0
2 6 0
1 5 0
3 5 0
3 4 0
-3 -4 0
2 3 0
"""

EXAMPLE_ORDER = list(range(8))


@pytest.fixture
def example_model():
    return parse_dimacs_cnf(EXAMPLE_CNF)


@pytest.fixture
def example_tree(example_model):
    g = build_primal_graph(example_model)
    return generate_pseudo_tree(g, EXAMPLE_ORDER)


def queens_model(n=4):
    """n-queens, one variable per column, value = row."""
    functions = []
    for i in range(n):
        for j in range(i + 1, n):
            values = []
            for a in range(n):
                for b in range(n):
                    values.append(0 if a == b or abs(a - b) == j - i else 1)
            functions.append(((i, j), values))
    return make_model([n] * n, functions, kind="constraint")


def all_pairs_equality_model(n, k):
    """Every pair of variables constrained to be equal (complete graph)."""
    eq = [1 if a == b else 0 for a in range(k) for b in range(k)]
    functions = [((i, j), eq) for i in range(n) for j in range(i + 1, n)]
    return make_model([k] * n, functions, kind="constraint")


def random_model(rng, weighted, max_product=1000):
    """Small random model with exact rational weights (or 0/1 tables)."""
    n = rng.randint(4, 8)
    domains = []
    product = 1
    for _ in range(n):
        k = rng.choice([2, 2, 3])
        if product * k > max_product:
            k = 2
        domains.append(k)
        product *= k
    functions = []
    for _ in range(rng.randint(1, 15)):
        arity = rng.randint(1, min(3, n))
        scope = rng.sample(range(n), arity)
        size = math.prod(domains[v] for v in scope)
        if weighted:
            values = [
                0 if rng.random() < 0.15 else Fraction(rng.randint(1, 16), 8)
                for _ in range(size)
            ]
        else:
            values = [0 if rng.random() < 0.3 else 1 for _ in range(size)]
        functions.append((scope, values))
    kind = "weighted" if weighted else "constraint"
    return make_model(domains, functions, kind=kind)


def random_cnf_text(rng):
    """Random small 3-CNF as DIMACS text."""
    n = rng.randint(5, 9)
    m = rng.randint(n, 2 * n)
    lines = ["p cnf %d %d" % (n, m)]
    for _ in range(m):
        width = rng.randint(1, 3)
        vs = rng.sample(range(1, n + 1), width)
        lits = [v if rng.random() < 0.5 else -v for v in vs]
        lines.append(" ".join(str(l) for l in lits) + " 0")
    return "\n".join(lines) + "\n"


def seeded_rng(seed):
    return random.Random(seed)
