"""Discrete graphical models: variables, domains, table functions.

A model is a set of variables with finite domains plus a set of
non-negative table functions combined by product.  Constraint networks
are the special case where every table value is 0 or 1.

Table values are stored as exact rationals (``int`` or
``fractions.Fraction``), so products, sums and normalizations are exact.
UAI decimal text parses to exact rationals and serializes back to the
same decimal digits.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import ParseError, ResourceLimitError

CONSTRAINT = "constraint"
WEIGHTED = "weighted"

#: Default cap on the number of entries of a brute-force table.
BRUTE_FORCE_CAP = 1 << 24


@dataclass(frozen=True)
class Variable:
    """A variable with a dense integer id and a finite domain size."""

    id: int
    domain_size: int

    def __post_init__(self):
        if self.domain_size < 1:
            raise ValueError("domain size must be >= 1, got %d" % self.domain_size)


@dataclass(frozen=True)
class TableFunction:
    """A dense table over an ordered scope, last scope variable fastest.

    ``shape[i]`` is the domain size of ``scope[i]``; ``values`` has
    length ``prod(shape)``.
    """

    scope: tuple
    shape: tuple
    values: tuple

    def __post_init__(self):
        if len(self.scope) != len(set(self.scope)):
            raise ValueError("duplicate variable in scope %r" % (self.scope,))
        if len(self.scope) != len(self.shape):
            raise ValueError("scope and shape length mismatch")
        size = math.prod(self.shape)
        if len(self.values) != size:
            raise ValueError(
                "table has %d entries, scope needs %d" % (len(self.values), size)
            )
        for v in self.values:
            if v < 0:
                raise ValueError("negative table value %s" % (v,))

    def value_at(self, assignment):
        """Table value at a (possibly partial) assignment covering the scope."""
        idx = 0
        for var, k in zip(self.scope, self.shape):
            val = assignment[var]
            if val is None:
                raise ValueError("variable %d unassigned in scope lookup" % var)
            idx = idx * k + val
        return self.values[idx]


@dataclass(frozen=True)
class GraphicalModel:
    """Variables plus table functions combined by product."""

    variables: tuple
    functions: tuple
    kind: str

    def __post_init__(self):
        if self.kind not in (CONSTRAINT, WEIGHTED):
            raise ValueError("kind must be %r or %r" % (CONSTRAINT, WEIGHTED))
        for i, v in enumerate(self.variables):
            if v.id != i:
                raise ValueError("variable ids must be dense 0..n-1")
        doms = self.domains
        for f in self.functions:
            for var, k in zip(f.scope, f.shape):
                if not 0 <= var < len(doms):
                    raise ValueError("scope variable %d out of range" % var)
                if doms[var] != k:
                    raise ValueError("shape mismatch for variable %d" % var)
            if self.kind == CONSTRAINT:
                for v in f.values:
                    if v != 0 and v != 1:
                        raise ValueError("constraint table value %s not in {0,1}" % (v,))

    @property
    def n(self):
        return len(self.variables)

    @property
    def domains(self):
        return tuple(v.domain_size for v in self.variables)


def make_model(domains, functions, kind=WEIGHTED):
    """Convenience constructor from a domain-size list and scope/value pairs.

    ``functions`` is an iterable of ``(scope, values)`` pairs.
    """
    variables = tuple(Variable(i, k) for i, k in enumerate(domains))
    tabs = []
    for scope, values in functions:
        scope = tuple(scope)
        shape = tuple(domains[v] for v in scope)
        tabs.append(TableFunction(scope, shape, tuple(values)))
    return GraphicalModel(variables, tuple(tabs), kind)


def weight_of_full_assignment(model, x, log_space=False):
    """Product of all function values at a full assignment.

    With ``log_space=True`` returns the natural log of the weight as a
    float (``-inf`` for weight zero), avoiding underflow on long
    products.
    """
    for i, v in enumerate(x):
        if v is None:
            raise ValueError("variable %d unassigned" % i)
    if log_space:
        acc = 0.0
        for f in model.functions:
            val = f.value_at(x)
            if val == 0:
                return float("-inf")
            acc += math.log(val)
        return acc
    acc = 1
    for f in model.functions:
        val = f.value_at(x)
        if val == 0:
            return val * 0
        acc *= val
    return acc


def full_assignments(domains):
    """Iterate all full assignments, last variable fastest."""
    return (list(t) for t in itertools.product(*[range(k) for k in domains]))


def brute_force_table(model, cap=BRUTE_FORCE_CAP):
    """Explicit table of the combination of all functions, over all variables.

    This is the exhaustive oracle used by the test suite; it refuses to
    build tables larger than ``cap`` entries.
    """
    size = math.prod(model.domains)
    if size > cap:
        raise ResourceLimitError(
            "brute-force table needs %d entries, cap is %d" % (size, cap)
        )
    values = tuple(weight_of_full_assignment(model, x) for x in full_assignments(model.domains))
    scope = tuple(range(model.n))
    return TableFunction(scope, model.domains, values)


# ---------------------------------------------------------------------------
# Parsers (UAI, DIMACS CNF, UAI evidence)

def _tokenize(text):
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    for lineno, line in enumerate(text.splitlines(), 1):
        for tok in line.split():
            yield tok, lineno


class _Reader:
    def __init__(self, text):
        self._it = _tokenize(text)
        self.line = 0

    def next(self, what):
        for tok, lineno in self._it:
            self.line = lineno
            return tok
        raise ParseError("unexpected end of input while reading %s" % what, self.line)

    def next_int(self, what, low=None):
        tok = self.next(what)
        try:
            val = int(tok)
        except ValueError:
            raise ParseError("expected integer %s, got %r" % (what, tok), self.line)
        if low is not None and val < low:
            raise ParseError("%s must be >= %d, got %d" % (what, low, val), self.line)
        return val

    def next_value(self, what):
        tok = self.next(what)
        try:
            val = Fraction(tok)
        except ValueError:
            raise ParseError("expected number %s, got %r" % (what, tok), self.line)
        if val < 0:
            raise ParseError("%s must be non-negative, got %s" % (what, tok), self.line)
        return val

    def at_end(self):
        try:
            tok, lineno = next(self._it)
        except StopIteration:
            return True
        self.line = lineno
        self._pending = tok
        return False


def parse_uai(text):
    """Parse a model in the UAI inference-evaluation format.

    Both BAYES and MARKOV preambles produce a weighted model; CPT
    normalization is not checked.
    """
    r = _Reader(text)
    preamble = r.next("preamble").upper()
    if preamble not in ("BAYES", "MARKOV"):
        raise ParseError("unknown preamble %r (expected BAYES or MARKOV)" % preamble, r.line)
    n = r.next_int("variable count", low=0)
    domains = [r.next_int("domain size of variable %d" % i, low=1) for i in range(n)]
    nfun = r.next_int("function count", low=0)
    scopes = []
    for i in range(nfun):
        arity = r.next_int("arity of function %d" % i, low=0)
        scope = []
        for j in range(arity):
            var = r.next_int("scope variable")
            if not 0 <= var < n:
                raise ParseError(
                    "scope variable %d of function %d out of range" % (var, i), r.line
                )
            scope.append(var)
        scopes.append(tuple(scope))
    functions = []
    for i, scope in enumerate(scopes):
        declared = r.next_int("entry count of table %d" % i, low=0)
        expected = math.prod(domains[v] for v in scope)
        if declared != expected:
            raise ParseError(
                "table %d declares %d entries, scope needs %d" % (i, declared, expected),
                r.line,
            )
        values = tuple(r.next_value("table %d entry" % i) for v in range(declared))
        functions.append((scope, values))
    return make_model(domains, functions, kind=WEIGHTED)


def _decimal_str(value):
    """Exact decimal text for a rational whose denominator is 2^a * 5^b.

    Falls back to ``repr(float(...))`` otherwise (lossy; UAI inputs never
    hit the fallback because decimal text always parses 2,5-smooth).
    """
    value = Fraction(value)
    num, den = value.numerator, value.denominator
    d = den
    exp2 = exp5 = 0
    while d % 2 == 0:
        d //= 2
        exp2 += 1
    while d % 5 == 0:
        d //= 5
        exp5 += 1
    if d != 1:
        return repr(float(value))
    shift = max(exp2, exp5)
    scaled = num * (10 ** shift) // den
    if shift == 0:
        return str(scaled)
    digits = str(scaled).rjust(shift + 1, "0")
    return (digits[:-shift] + "." + digits[-shift:]).rstrip("0").rstrip(".") or "0"


def serialize_uai(model):
    """Render a weighted model back to UAI text (MARKOV preamble)."""
    out = ["MARKOV", str(model.n), " ".join(str(k) for k in model.domains), str(len(model.functions))]
    for f in model.functions:
        out.append(" ".join([str(len(f.scope))] + [str(v) for v in f.scope]))
    for f in model.functions:
        out.append(str(len(f.values)))
        out.append(" ".join(_decimal_str(v) for v in f.values))
    return "\n".join(out) + "\n"


def parse_dimacs_cnf(text):
    """Parse DIMACS CNF into a constraint model, one 0/1 table per clause.

    Each clause forbids exactly the one assignment falsifying all its
    literals.  Tautological clauses become constant-1 tables.
    """
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    nvars = None
    clauses = []
    current = []
    for lineno, line in enumerate(text.splitlines(), 1):
        toks = line.split()
        if not toks or toks[0] == "c":
            continue
        if toks[0] == "p":
            if len(toks) != 4 or toks[1] != "cnf":
                raise ParseError("malformed problem line %r" % line, lineno)
            try:
                nvars = int(toks[2])
                int(toks[3])
            except ValueError:
                raise ParseError("malformed problem line %r" % line, lineno)
            continue
        if nvars is None:
            raise ParseError("clause before 'p cnf' header", lineno)
        for tok in toks:
            try:
                lit = int(tok)
            except ValueError:
                raise ParseError("bad literal %r" % tok, lineno)
            if lit == 0:
                clauses.append((tuple(current), lineno))
                current = []
            else:
                if abs(lit) > nvars:
                    raise ParseError("literal %d exceeds variable count %d" % (lit, nvars), lineno)
                current.append(lit)
    if current:
        raise ParseError("last clause missing terminating 0")
    if nvars is None:
        raise ParseError("missing 'p cnf' header")

    functions = []
    domains = [2] * nvars
    for lits, lineno in clauses:
        if not lits:
            # empty clause: unsatisfiable model
            functions.append(((), (0,)))
            continue
        signs = {}
        tautology = False
        for lit in lits:
            var = abs(lit) - 1
            sign = lit > 0
            if signs.get(var, sign) != sign:
                tautology = True
                break
            signs[var] = sign
        if tautology:
            continue
        scope = tuple(sorted(signs))
        forbidden = tuple(0 if signs[v] else 1 for v in scope)
        size = 1 << len(scope)
        values = [1] * size
        idx = 0
        for v, fval in zip(scope, forbidden):
            idx = idx * 2 + fval
        values[idx] = 0
        functions.append((scope, tuple(values)))
    return make_model(domains, functions, kind=CONSTRAINT)


def parse_uai_evidence(text, n=None):
    """Parse UAI evidence text: a count followed by variable/value pairs."""
    r = _Reader(text)
    count = r.next_int("evidence count", low=0)
    evidence = {}
    for i in range(count):
        var = r.next_int("evidence variable")
        val = r.next_int("evidence value", low=0)
        if n is not None and not 0 <= var < n:
            raise ParseError("evidence variable %d out of range" % var, r.line)
        evidence[var] = val
    return evidence
