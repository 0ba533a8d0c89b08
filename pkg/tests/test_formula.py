import logging
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from xorcount import (
    Formula,
    ParseError,
    XorConstraint,
    make_formula,
    normalize_clause,
    parse_dimacs,
    parse_extended_dimacs,
    serialize_extended_dimacs,
)


def test_parse_basic():
    f = parse_dimacs("p cnf 2 2\n1 2 0\n-1 0\n")
    assert f.num_vars == 2
    assert f.clauses == ((1, 2), (-1,))
    assert f.scope.is_full
    assert f.scope.variables == (1, 2)


def test_parse_scope_line():
    f = parse_dimacs("p cnf 3 1\nc ind 1 3 0\n1 -2 3 0\n")
    assert f.scope.variables == (1, 3)
    assert not f.scope.is_full


def test_parse_scope_lines_unioned():
    f = parse_dimacs("p cnf 4 1\nc ind 1 2 0\nc ind 2 4 0\n1 0\n")
    assert f.scope.variables == (1, 2, 4)


def test_parse_literal_out_of_range():
    with pytest.raises(ParseError, match="literal 3 out of range"):
        parse_dimacs("p cnf 2 1\n1 3 0\n")


def test_parse_errors_carry_line_numbers():
    with pytest.raises(ParseError, match="line 2"):
        parse_dimacs("p cnf 2 1\n1 3 0\n")


def test_parse_missing_terminator():
    with pytest.raises(ParseError, match="not 0-terminated"):
        parse_dimacs("p cnf 2 1\n1 2\n")


def test_parse_empty_file():
    with pytest.raises(ParseError, match="empty file"):
        parse_dimacs("")
    with pytest.raises(ParseError, match="empty file"):
        parse_dimacs("c just a comment\n")


def test_parse_malformed_header():
    with pytest.raises(ParseError, match="malformed header"):
        parse_dimacs("p cnf two 3\n")
    with pytest.raises(ParseError, match="malformed header"):
        parse_dimacs("1 2 0\n")


def test_parse_clause_spanning_lines():
    f = parse_dimacs("p cnf 3 1\n1 2\n3 0\n")
    assert f.clauses == ((1, 2, 3),)


def test_parse_clause_count_mismatch_warns(caplog):
    with caplog.at_level(logging.WARNING, logger="xorcount.formula"):
        f = parse_dimacs("p cnf 2 5\n1 0\n")
    assert f.clauses == ((1,),)
    assert any("declares 5" in r.message for r in caplog.records)


def test_parse_percent_end_marker():
    f = parse_dimacs("p cnf 2 1\n1 2 0\n%\nthis is not dimacs\n")
    assert f.clauses == ((1, 2),)


def test_parse_accepts_bytes():
    f = parse_dimacs(b"p cnf 1 1\n1 0\n")
    assert f.num_vars == 1


def test_parse_rejects_x_lines_in_plain_mode():
    with pytest.raises(ParseError, match="parity"):
        parse_dimacs("p cnf 2 1\n1 2 0\nx 1 2 0\n")


def test_parse_extended():
    f, xors = parse_extended_dimacs("p cnf 3 1\n1 2 0\nx 1 -2 3 0\n")
    assert f.clauses == ((1, 2),)
    assert xors == (XorConstraint(frozenset({1, 2, 3}), 0),)


def test_serialize_example_rhs1():
    f = make_formula(2, [(1, 2)])
    text = serialize_extended_dimacs(f, [XorConstraint(frozenset({1, 2}), 1)])
    assert text == "p cnf 2 1\n1 2 0\nx 1 2 0\n"


def test_serialize_example_rhs0():
    f = make_formula(2, [(1, 2)])
    text = serialize_extended_dimacs(f, [XorConstraint(frozenset({1, 2}), 0)])
    assert "x -1 2 0" in text


def test_serialize_no_xors_plain():
    f = make_formula(2, [(1, 2)])
    assert serialize_extended_dimacs(f) == "p cnf 2 1\n1 2 0\n"


def test_serialize_scope_and_roundtrip():
    f = make_formula(5, [(1, -4), (2, 3, 5)], scope=[1, 2, 4])
    xors = (XorConstraint(frozenset({2, 4}), 0), XorConstraint(frozenset({1}), 1))
    f2, xors2 = parse_extended_dimacs(serialize_extended_dimacs(f, xors))
    assert f2 == f
    assert set(xors2) == set(xors)


def test_serialize_rejects_degenerate_xor():
    f = make_formula(2, [(1, 2)])
    with pytest.raises(ValueError):
        serialize_extended_dimacs(f, [XorConstraint(frozenset(), 1)])


def test_normalize_clause():
    assert normalize_clause([1, 2, 1]) == (1, 2)
    assert normalize_clause([1, -1, 2]) is None
    # idempotent
    assert normalize_clause(normalize_clause([3, 3, -2])) == (3, -2)


def test_make_formula_drops_tautologies():
    f = make_formula(2, [(1, -1), (1, 2)])
    assert f.clauses == ((1, 2),)


def test_make_formula_validation():
    with pytest.raises(ValueError, match="out of range"):
        make_formula(2, [(1, 3)])
    with pytest.raises(ValueError, match="empty clause"):
        make_formula(2, [()])
    with pytest.raises(ValueError, match="scope"):
        make_formula(2, [(1,)], scope=[5])
    with pytest.raises(ValueError, match="non-empty"):
        make_formula(2, [(1,)], scope=[])


def test_scope_detects_full():
    f = make_formula(2, [(1,)], scope=[1, 2])
    assert f.scope.is_full


def test_free_variables_count_toward_n():
    f = parse_dimacs("p cnf 4 1\n1 0\n")
    assert f.num_vars == 4
    assert f.scope.variables == (1, 2, 3, 4)


@st.composite
def formulas(draw):
    n = draw(st.integers(1, 6))
    n_clauses = draw(st.integers(0, 8))
    clauses = []
    for _ in range(n_clauses):
        k = draw(st.integers(1, min(3, n)))
        vs = draw(
            st.lists(
                st.integers(1, n), min_size=k, max_size=k, unique=True
            )
        )
        clauses.append(tuple(v if draw(st.booleans()) else -v for v in vs))
    scope_full = draw(st.booleans())
    scope = None
    if not scope_full:
        scope = draw(st.lists(st.integers(1, n), min_size=1, max_size=n, unique=True))
    return make_formula(n, clauses, scope)


@given(formulas())
@settings(max_examples=60, deadline=None)
def test_parse_serialize_roundtrip(f):
    assert parse_extended_dimacs(serialize_extended_dimacs(f))[0] == f


@given(st.text(alphabet="pcnfx 0123456789-\n", max_size=80))
@settings(max_examples=120, deadline=None)
def test_parser_never_panics(text):
    # structured error or formula, nothing else
    try:
        parse_extended_dimacs(text)
    except ParseError:
        pass
