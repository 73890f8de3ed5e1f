"""Tests for the element theories: equality and linear integer arithmetic"""

import numpy as np
import pytest

from config.theories import load_theory, register_theory, THEORY_FACTORIES
from models.errors import TheoryError
from models.terms import Sort, Var, Const, Pair, App, TheoryLit
from models.theory_eq import EqualityTheory
from models.theory_lia import LinearArithmeticTheory

M = Var('M', Sort.X)
X = Var('X', Sort.X)
Y = Var('Y', Sort.X)
N = Var('N', Sort.X)


def lit(pred, *args):
    return TheoryLit(pred, tuple(args))


def c(value):
    return Const(value)


def holds(theory, lits, model):
    env = {v: model.get(v, 0) for lit_ in lits for v in _vars(lit_)}
    return all(theory.evaluate(lit_, env) for lit_ in lits)


def _vars(t):
    if isinstance(t, Var):
        return [t]
    if isinstance(t, (TheoryLit, App)):
        return [v for a in t.args for v in _vars(a)]
    if isinstance(t, Pair):
        return _vars(t.left) + _vars(t.right)
    return []


# ------------------------------------------------------------------ LIA

def test_lia_minimum_below_itself_is_unsat():
    """m =< y, m =< m, y < m has no integer solution"""
    lia = LinearArithmeticTheory()
    assert not lia.sat_x([lit('=<', M, Y), lit('=<', M, M), lit('<', Y, M)])


def test_lia_model_satisfies_literals():
    lia = LinearArithmeticTheory()
    lits = [lit('=', App('+', (X, Y)), c(3)), lit('>=', X, c(2)), lit('>=', Y, c(1))]
    verdict = lia.sat_x(lits)
    assert verdict, "x + y = 3, x >= 2, y >= 1 is satisfiable"
    assert verdict.model == {X: 2, Y: 1}, f"Model was {verdict.model}"


def test_lia_disequality_splits():
    lia = LinearArithmeticTheory()
    lits = [lit('neq', X, c(0)), lit('>=', X, c(0)), lit('=<', X, c(1))]
    verdict = lia.sat_x(lits)
    assert verdict and verdict.model[X] == 1
    assert not lia.sat_x([lit('neq', X, c(0)), lit('=', X, c(0))])


def test_lia_equality_without_unit_coefficient():
    """3x + 5y = 1 needs the mod-hat step"""
    lia = LinearArithmeticTheory()
    lhs = App('+', (App('*', (c(3), X)), App('*', (c(5), Y))))
    lits = [lit('=', lhs, c(1))]
    verdict = lia.sat_x(lits)
    assert verdict, "3x + 5y = 1 has integer solutions"
    assert holds(lia, lits, verdict.model)
    assert not lia.sat_x([lit('=', App('*', (c(2), X)), c(1))]), "2x = 1 has none"


def _band(upper):
    """27 =< 11x + 13y =< 45 and -10 =< 7x - 9y =< upper"""
    a = App('+', (App('*', (c(11), X)), App('*', (c(13), Y))))
    b = App('-', (App('*', (c(7), X)), App('*', (c(9), Y))))
    return [lit('>=', a, c(27)), lit('=<', a, c(45)), lit('>=', b, c(-10)), lit('=<', b, c(upper))]


def test_lia_dark_shadow():
    """A real solution is not enough: the band has no integer point until it is widened"""
    lia = LinearArithmeticTheory()
    assert not lia.sat_x(_band(4))
    lits = _band(5)
    verdict = lia.sat_x(lits)
    assert verdict, "x = 2, y = 1 lies in the widened band"
    assert holds(lia, lits, verdict.model)


def test_lia_functional_predicates():
    lia = LinearArithmeticTheory()
    verdict = lia.sat_x([lit('sum', X, Y, N), lit('=', X, c(1)), lit('=', Y, c(2))])
    assert verdict.model[N] == 3
    assert lia.fp_lookup('mul').evaluate(3, 4) == 12
    with pytest.raises(TheoryError) as info:
        lia.fp_lookup('max')
    assert "mul, sum" in str(info.value)


def test_lia_atoms_and_pairs():
    lia = LinearArithmeticTheory()
    verdict = lia.sat_x([lit('=', X, c('a'))])
    assert verdict and verdict.model == {X: 'a'}, "A variable may take an atom value"
    verdict = lia.sat_x([lit('=', Y, X), lit('=', X, c('b')), lit('neq', N, Y), lit('>=', N, c(4))])
    assert verdict and verdict.model == {X: 'b', Y: 'b', N: 4}, f"Model was {verdict.model}"
    assert not lia.sat_x([lit('=', X, c('a')), lit('=', X, c('b'))])
    assert not lia.sat_x([lit('=', X, c('a')), lit('=<', X, c(3))]), "Arithmetic over an atom fails"
    assert not lia.sat_x([lit('=', App('+', (X, c(1))), c('a'))]), "A sum is never an atom"
    assert lia.sat_x([lit('neq', c('a'), c('b'))])
    with pytest.raises(TheoryError):
        lia.sat_x([lit('=<', X, c('a'))])
    with pytest.raises(TheoryError):
        lia.sat_x([lit('=', App('*', (X, Y)), c(1))])


def test_lia_complements():
    lia = LinearArithmeticTheory()
    assert lia.negate_lit(lit('=<', X, Y)) == lit('>', X, Y)
    assert lia.negate_lit(lit('neq', X, Y)) == lit('=', X, Y)
    with pytest.raises(TheoryError):
        lia.negate_lit(lit('sum', X, Y, N))


BOX = np.arange(-20, 21)


def _random_row(rng, nvars):
    """(coefficients, predicate, constant) of a random linear literal"""
    coefs = rng.integers(-3, 4, size=nvars)
    if not coefs.any():
        coefs[int(rng.integers(nvars))] = 1
    pred = ('=', 'neq', '=<', '<', '>=')[int(rng.integers(5))]
    return coefs, pred, int(rng.integers(-10, 11))


def _as_literal(row, variables):
    coefs, pred, const = row
    lhs = None
    for k, v in zip(coefs, variables):
        term = App('*', (c(int(k)), v))
        lhs = term if lhs is None else App('+', (lhs, term))
    return lit(pred, lhs, c(const))


def _box_has_solution(rows, nvars):
    """Any point of BOX^nvars satisfying every row, checked on the whole grid at once"""
    axes = np.ix_(*([BOX] * nvars))
    compare = {'=': np.equal, 'neq': np.not_equal, '=<': np.less_equal,
               '<': np.less, '>=': np.greater_equal}
    mask = np.ones((len(BOX),) * nvars, dtype=bool)
    for coefs, pred, const in rows:
        lhs = sum(int(k) * axis for k, axis in zip(coefs, axes))
        mask &= compare[pred](lhs, const)
    return bool(mask.any())


def test_lia_agrees_with_brute_force():
    """A returned model is a model; a solution in the box means sat"""
    lia = LinearArithmeticTheory()
    rng = np.random.default_rng(11)
    variables = [X, Y, N, M]
    for _ in range(500):
        nvars = int(rng.integers(1, 5))
        rows = [_random_row(rng, nvars) for _ in range(int(rng.integers(1, 9)))]
        lits = [_as_literal(row, variables[:nvars]) for row in rows]
        verdict = lia.sat_x(lits)
        if verdict:
            assert holds(lia, lits, verdict.model), f"Bad model {verdict.model} for {lits}"
        if _box_has_solution(rows, nvars):
            assert verdict, f"sat_x missed a solution of {lits}"


# ------------------------------------------------------------------- EQ

def test_eq_union_find():
    eq = EqualityTheory()
    assert not eq.sat_x([lit('=', X, Y), lit('=', Y, c('a')), lit('neq', X, c('a'))])
    assert not eq.sat_x([lit('=', X, c('a')), lit('=', X, c('b'))])
    verdict = eq.sat_x([lit('=', X, Y), lit('neq', Y, c('b'))])
    assert verdict and verdict.model[X] == verdict.model[Y] != 'b'


def test_eq_models_use_fresh_atoms():
    eq = EqualityTheory()
    verdict = eq.sat_x([lit('neq', X, Y)])
    assert verdict.model == {X: 'k0', Y: 'k1'}
    verdict = eq.sat_x([lit('neq', X, c('k0'))])
    assert verdict.model[X] == 'k1', "Generated atoms avoid the constants of the input"


def test_eq_rejects_other_symbols():
    eq = EqualityTheory()
    with pytest.raises(TheoryError):
        eq.check_literal(lit('=<', X, Y))
    with pytest.raises(TheoryError):
        eq.sat_x([lit('=', X, App('+', (Y, c(1))))])
    with pytest.raises(TheoryError):
        eq.negate_lit(lit('=<', X, Y))


# -------------------------------------------------------------- registry

def test_theory_registry():
    assert isinstance(load_theory('eq'), EqualityTheory)
    with pytest.raises(ValueError) as info:
        load_theory('bitvectors')
    assert "eq, lia" in str(info.value)
    with pytest.raises(ValueError):
        register_theory('lia', LinearArithmeticTheory)
    register_theory('eq2', EqualityTheory)
    try:
        assert load_theory('eq2').name == 'eq'
    finally:
        del THEORY_FACTORIES['eq2']
