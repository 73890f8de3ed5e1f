"""Linear integer arithmetic theory decided with the Omega test

Literals are linear (in)equalities over integer variables. Each literal
is turned into a numpy row [coefficients..., constant] meaning either
row . (x, 1) == 0 or row . (x, 1) >= 0. Equalities are eliminated
exactly (with the mod-hat step when no unit coefficient exists), then
variables are projected out of the inequalities; when the projection is
not exact the dark shadow and the splinters are searched, so the
procedure decides integer satisfiability and returns a model.
"""

import logging
import math

import numpy as np

from models.errors import TheoryError, OracleError
from models.terms import Var, Const, App, Pair, TheoryLit
from models.theory import Theory, TheoryVerdict, FunctionalPredicate, UNSAT
from models.values import is_int

logger = logging.getLogger(__name__)


def _linearize(t):
    """Return (coefficients by variable, constant) for a linear term"""
    if isinstance(t, Var):
        return {t: 1}, 0
    if isinstance(t, Const):
        if not is_int(t.value):
            raise TheoryError(f"theory 'lia' cannot interpret atom '{t.value}' in arithmetic")
        return {}, t.value
    if isinstance(t, App) and len(t.args) == 2:
        (lc, lk), (rc, rk) = _linearize(t.args[0]), _linearize(t.args[1])
        if t.fn in ('+', '-'):
            sign = 1 if t.fn == '+' else -1
            coefs = dict(lc)
            for v, c in rc.items():
                coefs[v] = coefs.get(v, 0) + sign * c
            return {v: c for v, c in coefs.items() if c}, lk + sign * rk
        if t.fn == '*':
            if not lc:
                return {v: lk * c for v, c in rc.items() if lk * c}, lk * rk
            if not rc:
                return {v: rk * c for v, c in lc.items() if rk * c}, lk * rk
            raise TheoryError("theory 'lia' is linear: one factor of '*' must be constant")
    if isinstance(t, Pair):
        raise TheoryError("theory 'lia' cannot interpret pairs in arithmetic")
    raise TheoryError(f"theory 'lia' cannot interpret term {t!r}")


def _difference(lhs, rhs):
    (lc, lk), (rc, rk) = _linearize(lhs), _linearize(rhs)
    coefs = dict(lc)
    for v, c in rc.items():
        coefs[v] = coefs.get(v, 0) - c
    return {v: c for v, c in coefs.items() if c}, lk - rk


def _atom_value(t, atoms):
    if isinstance(t, Const) and not is_int(t.value):
        return t.value
    if isinstance(t, Var):
        return atoms.get(t)
    return None


def _uses_atom_value(t, atoms):
    if isinstance(t, Var):
        return t in atoms
    if isinstance(t, App):
        return any(_uses_atom_value(a, atoms) for a in t.args)
    return False


def atom_values(lits):
    """Variables an equality chain ties to an atom, e.g. X = a & Y = X"""
    atoms = {}
    changed = True
    while changed:
        changed = False
        for lit in lits:
            if lit.pred != '=':
                continue
            for v, t in (lit.args, lit.args[::-1]):
                if isinstance(v, Var) and v not in atoms:
                    value = _atom_value(t, atoms)
                    if value is not None:
                        atoms[v] = value
                        changed = True
    return atoms


def _floor_div(a, b):
    return a // b


def _ceil_div(a, b):
    return -((-a) // b)


def _matrix(rows, ncols):
    """Inequality rows as one (m, ncols + 1) integer matrix"""
    if isinstance(rows, np.ndarray) and rows.ndim == 2:
        return rows
    return np.array(rows, dtype=np.int64).reshape(-1, ncols + 1)


class _Omega:
    """Integer feasibility with model extraction over numpy rows"""

    def solve(self, eqs, geqs, ncols):
        eqs, geqs = self._normalize(eqs, _matrix(geqs, ncols))
        if eqs is None:
            return None
        if eqs:
            return self._eliminate_equality(eqs, geqs, ncols)
        return self._eliminate_inequalities(geqs, ncols)

    def _normalize(self, eqs, geqs):
        out_eqs = []
        for row in eqs:
            coefs, const = row[:-1], int(row[-1])
            g = int(np.gcd.reduce(np.abs(coefs))) if coefs.size else 0
            if g == 0:
                if const != 0:
                    return None, None
                continue
            if const % g:
                return None, None
            out_eqs.append(row // g)
        if not len(geqs):
            return out_eqs, geqs
        coefs = geqs[:, :-1]
        if coefs.shape[1]:
            g = np.gcd.reduce(np.abs(coefs), axis=1)
        else:
            g = np.zeros(len(geqs), dtype=np.int64)
        trivial = g == 0
        if (geqs[trivial, -1] < 0).any():
            return None, None
        keep, g = geqs[~trivial], g[~trivial]
        norm = np.column_stack((keep[:, :-1] // g[:, None], np.floor_divide(keep[:, -1], g)))
        if len(norm):
            _, first = np.unique(norm, axis=0, return_index=True)
            norm = norm[np.sort(first)]
        return out_eqs, norm

    def _eliminate_equality(self, eqs, geqs, ncols):
        row = eqs[0]
        coefs = row[:-1]
        nonzero = np.flatnonzero(coefs)
        k = int(nonzero[np.argmin(np.abs(coefs[nonzero]))])
        a_k = int(coefs[k])
        if abs(a_k) == 1:
            # x_k = expr, expr = -a_k * (row without x_k)
            expr = -a_k * row
            expr[k] = 0
            rest_eqs = [self._substitute(r, k, expr) for r in eqs[1:]]
            model = self.solve(rest_eqs, self._substitute(geqs, k, expr), ncols)
            if model is None:
                return None
            model[k] = int(np.dot(expr[:-1], model)) + int(expr[-1])
            return model

        # mod-hat step: introduce sigma as a new column
        m = abs(a_k) + 1
        sign = 1 if a_k > 0 else -1

        def modhat(a):
            return a - m * _floor_div(2 * a + m, 2 * m)

        eqs = [np.insert(r, ncols, 0) for r in eqs]
        geqs = np.insert(geqs, ncols, 0, axis=1)
        expr = np.zeros(ncols + 2, dtype=np.int64)
        for i in range(ncols):
            if i != k:
                expr[i] = sign * modhat(int(coefs[i]))
        expr[ncols] = -sign * m
        expr[-1] = sign * modhat(int(row[-1]))
        new_eqs = [self._substitute(r, k, expr) for r in eqs]
        model = self.solve(new_eqs, self._substitute(geqs, k, expr), ncols + 1)
        if model is None:
            return None
        model[k] = int(np.dot(expr[:-1], model)) + int(expr[-1])
        return model[:ncols]

    @staticmethod
    def _substitute(rows, k, expr):
        """Replace x_k by expr in one row or in every row of a matrix"""
        out = rows + np.multiply.outer(rows[..., k], expr)
        out[..., k] = 0
        return out

    def _eliminate_inequalities(self, geqs, ncols):
        if not len(geqs):
            return np.zeros(ncols, dtype=object)
        coefs = geqs[:, :-1]
        active = np.flatnonzero((coefs != 0).any(axis=0))
        if not active.size:
            return np.zeros(ncols, dtype=object)
        j = self._choose_variable(coefs, active)
        column = coefs[:, j]
        lowers, uppers, others = geqs[column > 0], geqs[column < 0], geqs[column == 0]

        real, dark = [], []
        exact = bool((lowers[:, j] == 1).all() or (uppers[:, j] == -1).all())
        for lo in lowers:
            a = int(lo[j])
            for up in uppers:
                b = int(-up[j])
                combined = b * lo + a * up
                real.append(combined)
                if not exact:
                    shifted = combined.copy()
                    shifted[-1] -= (a - 1) * (b - 1)
                    dark.append(shifted)
        real = np.vstack([others, _matrix(real, ncols)])

        if exact:
            model = self.solve([], real, ncols)
            return self._pick(model, j, lowers, uppers)

        if self.solve([], real, ncols) is None:
            return None
        model = self.solve([], np.vstack([others, _matrix(dark, ncols)]), ncols)
        if model is not None:
            return self._pick(model, j, lowers, uppers)
        # splinters: some lower bound is tight within a small offset
        m_max = max(int(-up[j]) for up in uppers)
        for lo in lowers:
            a = int(lo[j])
            for i in range((m_max * a - a - m_max) // m_max + 1):
                tight = lo.copy()
                tight[-1] -= i
                model = self.solve([tight], geqs, ncols)
                if model is not None:
                    return model
        return None

    @staticmethod
    def _choose_variable(coefs, active):
        """Exact eliminations first, then the fewest combined rows"""
        lowers = (coefs > 0).sum(axis=0)
        uppers = (coefs < 0).sum(axis=0)
        exact = ((coefs == 1) | (coefs <= 0)).all(axis=0) | ((coefs == -1) | (coefs >= 0)).all(axis=0)
        return int(min(active, key=lambda j: (not exact[j], int(lowers[j]) * int(uppers[j]), j)))

    @staticmethod
    def _pick(model, j, lowers, uppers):
        if model is None:
            return None
        model = model.copy()
        model[j] = 0
        lo, hi = None, None
        for r in lowers:
            a = int(r[j])
            rest = int(np.dot(r[:-1], model)) + int(r[-1])
            bound = _ceil_div(-rest, a)
            lo = bound if lo is None else max(lo, bound)
        for r in uppers:
            b = int(-r[j])
            rest = int(np.dot(r[:-1], model)) + int(r[-1])
            bound = _floor_div(rest, b)
            hi = bound if hi is None else min(hi, bound)
        if lo is not None and hi is not None and lo > hi:
            return None
        if lo is not None and lo > 0:
            model[j] = lo
        elif hi is not None and hi < 0:
            model[j] = hi
        else:
            model[j] = 0
        return model


def _sum_literal(args):
    x, y, n = args
    return TheoryLit('=', (n, App('+', (x, y))))


def _mul_literal(args):
    k, x, n = args
    return TheoryLit('=', (n, App('*', (k, x))))


class LinearArithmeticTheory(Theory):
    """Linear (in)equalities over the integers"""

    name = 'lia'
    predicates = frozenset({'=', 'neq', '=<', '<', '>=', '>'})
    complements = {'=': 'neq', 'neq': '=', '=<': '>', '>': '=<', '<': '>=', '>=': '<'}
    functions = frozenset({'+', '-', '*'})
    functional = {
        'sum': FunctionalPredicate('sum', 3, lambda x, y: x + y, _sum_literal),
        'mul': FunctionalPredicate('mul', 3, lambda k, x: k * x, _mul_literal),
    }

    def sat_x(self, lits):
        lits = self.expand_functional(lits)
        atoms = atom_values(lits)
        rows = []
        for lit in lits:
            row = self._row(lit, atoms)
            if row is True:
                continue
            if row is False:
                return UNSAT
            rows.append(row)

        variables = sorted({v for kind, coefs, _ in rows for v in coefs},
                           key=lambda v: (v.fresh_id is not None, v.fresh_id or 0, v.name))
        column = {v: i for i, v in enumerate(variables)}
        ncols = len(variables)

        def vector(coefs, const):
            vec = np.zeros(ncols + 1, dtype=np.int64)
            for v, c in coefs.items():
                vec[column[v]] = c
            vec[-1] = const
            return vec

        eqs, geqs, neqs = [], [], []
        for kind, coefs, const in rows:
            target = {'eq': eqs, 'geq': geqs, 'neq': neqs}[kind]
            target.append(vector(coefs, const))

        model = self._decide(eqs, geqs, neqs, ncols)
        if model is None:
            logger.debug("lia: unsat over %d literals", len(lits))
            return UNSAT
        values = {v: int(model[column[v]]) for v in variables}
        values.update(atoms)
        return TheoryVerdict(True, values)

    def _decide(self, eqs, geqs, neqs, ncols):
        omega = _Omega()
        if not neqs:
            return omega.solve(eqs, geqs, ncols)
        if omega.solve(eqs, geqs, ncols) is None:
            return None
        row, rest = neqs[0], neqs[1:]
        above = row.copy()
        above[-1] -= 1
        below = -row
        below[-1] -= 1
        for branch in (below, above):
            model = self._decide(eqs, geqs + [branch], rest, ncols)
            if model is not None:
                return model
        return None

    def _row(self, lit, atoms):
        """(kind, coefficients, constant) for a literal; True/False when decided.

        Atoms are distinct from every integer: an equality with an atom on
        either side is decided by comparing atom values, and arithmetic
        over an atom-valued variable holds for no integer.
        """
        lhs, rhs = lit.args
        if lit.pred in ('=', 'neq'):
            left, right = _atom_value(lhs, atoms), _atom_value(rhs, atoms)
            if left is not None or right is not None:
                same = left == right
                return same if lit.pred == '=' else not same
        if _uses_atom_value(lhs, atoms) or _uses_atom_value(rhs, atoms):
            return False
        if lit.pred == '=':
            coefs, const = _difference(lhs, rhs)
            return ('eq', coefs, const)
        if lit.pred == 'neq':
            coefs, const = _difference(lhs, rhs)
            return ('neq', coefs, const)
        if lit.pred == '=<':
            coefs, const = _difference(rhs, lhs)
            return ('geq', coefs, const)
        if lit.pred == '<':
            coefs, const = _difference(rhs, lhs)
            return ('geq', coefs, const - 1)
        if lit.pred == '>=':
            coefs, const = _difference(lhs, rhs)
            return ('geq', coefs, const)
        if lit.pred == '>':
            coefs, const = _difference(lhs, rhs)
            return ('geq', coefs, const - 1)
        raise TheoryError(f"theory 'lia' has no predicate '{lit.pred}'")

    def apply_function(self, fn, values):
        if not all(is_int(v) for v in values):
            raise OracleError(f"'{fn}' applied to non-integers {values}")
        if fn == '+':
            return values[0] + values[1]
        if fn == '-':
            return values[0] - values[1]
        if fn == '*':
            return values[0] * values[1]
        return super().apply_function(fn, values)

    def compare(self, pred, values):
        left, right = values
        if not (is_int(left) and is_int(right)):
            raise OracleError(f"'{pred}' applied to non-integers {values}")
        if pred == '=<':
            return left <= right
        if pred == '<':
            return left < right
        if pred == '>=':
            return left >= right
        if pred == '>':
            return left > right
        return super().compare(pred, values)

    def element_values(self, universe):
        return tuple(universe.ints)

    def default_value(self, avoid=()):
        return 0
