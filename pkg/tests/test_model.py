import math
from fractions import Fraction

import pytest

from aomdd import (
    ParseError,
    ResourceLimitError,
    brute_force_table,
    make_model,
    parse_dimacs_cnf,
    parse_uai,
    parse_uai_evidence,
    serialize_uai,
    weight_of_full_assignment,
)
from aomdd.model import full_assignments


def test_parse_uai_minimal():
    m = parse_uai("MARKOV 1 2 1 1 0 2 0.4 0.6")
    assert m.n == 1
    assert m.domains == (2,)
    assert m.functions[0].values == (Fraction(2, 5), Fraction(3, 5))
    assert m.kind == "weighted"


def test_parse_uai_bad_preamble():
    with pytest.raises(ParseError, match="FOO"):
        parse_uai("FOO 1 2 0")


def test_parse_uai_wrong_table_size():
    with pytest.raises(ParseError, match="declares 3"):
        parse_uai("MARKOV 1 2 1 1 0 3 0.4 0.3 0.3")


def test_parse_uai_scope_out_of_range():
    with pytest.raises(ParseError):
        parse_uai("MARKOV 1 2 1 1 5 2 0.4 0.6")


def test_parse_uai_truncated():
    with pytest.raises(ParseError, match="end of input"):
        parse_uai("MARKOV 2 2 2 1 2 0 1 4 0.1 0.2 0.3")


def test_uai_round_trip():
    text = "MARKOV 2 2 3 2 1 0 2 0 1 2 0.5 0.125 6 0 0.2 0.3 0.1 0.05 0.35"
    m1 = parse_uai(text)
    m2 = parse_uai(serialize_uai(m1))
    assert m1 == m2
    assert serialize_uai(m1) == serialize_uai(m2)


def test_weight_of_full_assignment_product():
    m = make_model([2, 2], [((0,), [Fraction(1, 2), Fraction(1, 2)]),
                            ((1,), [Fraction(1, 4), Fraction(3, 4)])])
    assert weight_of_full_assignment(m, [0, 1]) == Fraction(3, 8)
    assert weight_of_full_assignment(m, [1, 0]) == Fraction(1, 8)


def test_weight_log_space():
    m = make_model([2], [((0,), [0, Fraction(1, 2)])])
    assert weight_of_full_assignment(m, [0], log_space=True) == float("-inf")
    assert weight_of_full_assignment(m, [1], log_space=True) == pytest.approx(
        math.log(0.5)
    )


def test_weight_unassigned_errors():
    m = make_model([2], [((0,), [1, 1])])
    with pytest.raises(ValueError, match="unassigned"):
        weight_of_full_assignment(m, [None])


def test_brute_force_matches_pointwise():
    m = make_model(
        [2, 2],
        [((0,), [Fraction(1, 2), Fraction(1, 2)]),
         ((1,), [Fraction(1, 4), Fraction(3, 4)])],
    )
    t = brute_force_table(m)
    assert t.values == (
        Fraction(1, 8), Fraction(3, 8), Fraction(1, 8), Fraction(3, 8)
    )
    for x in full_assignments(m.domains):
        assert t.value_at(x) == weight_of_full_assignment(m, x)


def test_brute_force_cap():
    m = make_model([2] * 30, [((0,), [1, 1])])
    with pytest.raises(ResourceLimitError):
        brute_force_table(m)


def test_dimacs_clause_relation():
    # ~A | B allows every (A, B) pair except A=1, B=0
    m = parse_dimacs_cnf("p cnf 2 1\n-1 2 0\n")
    f = m.functions[0]
    assert f.scope == (0, 1)
    assert f.value_at([1, 0]) == 0
    for x in ([0, 0], [0, 1], [1, 1]):
        assert f.value_at(x) == 1


def test_dimacs_empty_clause_list():
    m = parse_dimacs_cnf("p cnf 2 0\n")
    assert m.n == 2
    assert not m.functions
    assert weight_of_full_assignment(m, [0, 1]) == 1


def test_dimacs_unit_clause():
    m = parse_dimacs_cnf("p cnf 1 1\n1 0\n")
    assert m.functions[0].values == (0, 1)


def test_dimacs_tautology_dropped():
    m = parse_dimacs_cnf("p cnf 2 1\n1 -1 2 0\n")
    assert not m.functions


def test_dimacs_errors():
    with pytest.raises(ParseError, match="exceeds"):
        parse_dimacs_cnf("p cnf 2 1\n3 0\n")
    with pytest.raises(ParseError, match="terminating 0"):
        parse_dimacs_cnf("p cnf 2 1\n1 2\n")
    with pytest.raises(ParseError, match="header"):
        parse_dimacs_cnf("c nothing\n")


def test_constraint_weights_binary(example_model):
    for x in full_assignments(example_model.domains):
        assert weight_of_full_assignment(example_model, x) in (0, 1)


def test_constraint_example_violation(example_model):
    # F=0, H=0 falsifies the clause F|H
    x = [1, 1, 1, 0, 1, 0, 0, 0]
    assert weight_of_full_assignment(example_model, x) == 0


def test_parse_evidence():
    assert parse_uai_evidence("2 0 1 3 0", n=4) == {0: 1, 3: 0}
    with pytest.raises(ParseError, match="out of range"):
        parse_uai_evidence("1 9 0", n=4)
