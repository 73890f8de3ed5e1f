"""Tests for the .slog parser, the printer and program validation"""

from pathlib import Path

import numpy as np
import pytest

from models.errors import ParseError, DefinitionError, DesugarError
from models.terms import (
    Var, Const, Pair, EMPTY, Ext, And, Or, SetEq, In, TheoryLit, Call, Neg,
    Implies, Foreach, Exists, Program,
)
from tests.generators import random_surface_formula
from ui.parser import parse, parse_formula, parse_term, term_value
from ui.printer import pretty, format_program

SAMPLES = Path(__file__).parent.parent / 'samples'

X, Y, N, R, Z = Var('X'), Var('Y'), Var('N'), Var('R'), Var('Z')


def test_parse_min_query():
    """The minimum example parses into a membership and a foreach"""
    program = parse((SAMPLES / 'min.slog').read_text())
    assert program.definitions == ()
    m, y, s = Var('M'), Var('Y'), Var('S')
    expected = And((
        In(m, Ext(y, s)),
        Foreach(X, Ext(y, s), TheoryLit('=<', (m, X))),
    ))
    assert program.query == expected, f"Parsed {program.query}"


def test_parse_extended_quantifier():
    """[N] and the trailing functional predicate fill locals and fpreds"""
    f = parse_formula("foreach([X,Y] in R, [N], Z < N, sum(X,Y,N))")
    assert f == Foreach(Pair(X, Y), R, TheoryLit('<', (Z, N)), (N,), Call('sum', (X, Y, N)))
    assert f.is_extended


def test_multi_binder_nests_outermost_first():
    f = parse_formula("exists([X in A, Y in B], X neq Y)")
    assert f == Exists(X, Var('A'), Exists(Y, Var('B'), TheoryLit('neq', (X, Y))))


def test_subset_becomes_foreach():
    f = parse_formula("subset(A, {X : A | X > 0})")
    assert f == Foreach(X, Var('A'), TheoryLit('>', (X, Const(0))))


def test_equality_kinds():
    """= is a set equation unless an element constructor is involved"""
    assert parse_formula("A = B") == SetEq(Var('A'), Var('B'))
    assert parse_formula("A = {}") == SetEq(Var('A'), EMPTY)
    assert parse_formula("X = 1") == TheoryLit('=', (X, Const(1)))
    assert parse_formula("X = [Y,a]") == TheoryLit('=', (X, Pair(Y, Const('a'))))


def test_connective_precedence():
    """& binds tighter than or, which binds tighter than implies"""
    f = parse_formula("X in A & Y in A or X in B implies neg(Y in B)")
    p, q, r = In(X, Var('A')), In(Y, Var('A')), In(X, Var('B'))
    assert f == Implies(Or((And((p, q)), r)), Neg(In(Y, Var('B'))))


@pytest.mark.parametrize('path', sorted(SAMPLES.glob('*.slog')), ids=lambda p: p.stem)
def test_samples_round_trip(path):
    """Printing a parsed sample and parsing it again gives the same program"""
    program = parse(path.read_text())
    again = parse(format_program(program))
    assert again == program, f"{path.name} changed after printing:\n{format_program(program)}"


def test_random_formulas_round_trip():
    """pretty output of generated formulas parses back to the same tree"""
    rng = np.random.default_rng(7)
    for _ in range(1000):
        f = random_surface_formula(rng)
        text = pretty(f)
        assert parse_formula(text) == f, f"Round trip failed for: {text}"


def test_parse_error_has_position():
    with pytest.raises(ParseError) as info:
        parse("X in A &\n  & Y in B.")
    assert info.value.line == 2, f"Reported line {info.value.line}"
    assert info.value.column is not None
    assert str(info.value).startswith("line 2")


def test_parse_errors():
    """Missing final dot, generated names and bad bytes are syntax errors"""
    with pytest.raises(ParseError):
        parse("X in A")
    with pytest.raises(ParseError):
        parse("_N1 in A.")
    with pytest.raises(ParseError):
        parse(b"X in \xff.")


def test_control_terms_must_be_distinct():
    with pytest.raises(ParseError):
        parse("foreach([X,X] in R, true).")
    with pytest.raises(ParseError):
        parse("foreach(X in R, [X], true, sum(X,X,X)).")


def test_subset_over_a_different_domain():
    with pytest.raises(DesugarError):
        parse("subset(A, {X : B | X = X}).")


def test_definition_errors():
    """Duplicate, recursive and wrongly called definitions are rejected"""
    with pytest.raises(DefinitionError):
        parse("p(A) :- A = {}. p(B) :- B = {}. p(C).")
    with pytest.raises(DefinitionError) as info:
        parse("p(A) :- q(A). q(A) :- p(A). p(C).")
    assert "p -> q -> p" in str(info.value)
    with pytest.raises(DefinitionError):
        parse("p(A) :- A = {}. p(C, D).")
    with pytest.raises(ParseError):
        parse("p(A, A) :- A = {}. p(C, D).")


def test_program_with_definitions():
    program = parse((SAMPLES / 'addusr_bad.slog').read_text())
    assert [d.name for d in program.definitions] == ['inv', 'addUsr']
    assert isinstance(program, Program)
    assert isinstance(program.query, Neg) and isinstance(program.query.body, Implies)


def test_term_values():
    """Printed answer values read back as Python values"""
    assert term_value(parse_term("{[1,a],2}")) == frozenset({(1, 'a'), 2})
    assert term_value(parse_term("{}")) == frozenset()
    assert term_value(parse_term("-3")) == -3
    with pytest.raises(ParseError):
        term_value(parse_term("X"))
