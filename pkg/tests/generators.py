"""Random formulas for differential and round-trip tests

All generators take a numpy Generator so every test is reproducible
from its seed.
"""

from models.terms import (
    Sort, Var, Const, Pair, App, EMPTY, Ext, TRUE, FALSE, And, Or, SetEq, In,
    NotIn, TheoryLit, Neg, Implies, Foreach, Exists, ext,
)

CONSTANTS = (0, 1, 2)
SET_VARS = ('S', 'T')
# Y is also the bound name of every generated quantifier
ELEMENT_VARS = ('X', 'Y')


def pick(rng, items):
    return items[int(rng.integers(len(items)))]


# ------------------------------------------------------------ solver inputs

def _domain(rng, set_vars=SET_VARS):
    kind = int(rng.integers(4))
    if kind == 0:
        elems = rng.choice(CONSTANTS, size=int(rng.integers(1, 3)), replace=False)
        return "{" + ",".join(str(int(e)) for e in elems) + "}"
    if kind == 1:
        return f"{{{pick(rng, CONSTANTS)} / {pick(rng, set_vars)}}}"
    return pick(rng, set_vars)


def _element(rng):
    if rng.random() < 0.5:
        return pick(rng, ELEMENT_VARS)
    return str(pick(rng, CONSTANTS))


def _filter_literal(rng, bound):
    """Element literal over a bound variable and a free variable or constant"""
    op = pick(rng, ('=<', 'neq', '=', '<'))
    return f"{bound} {op} {_element(rng)}"


def _membership(rng, set_vars=SET_VARS):
    op = pick(rng, ('in', 'nin'))
    return f"{_element(rng)} {op} {_domain(rng, set_vars)}"


def _theory_literal(rng):
    return f"{pick(rng, ELEMENT_VARS)} {pick(rng, ('=<', 'neq', '>='))} {pick(rng, CONSTANTS)}"


def _set_equation(rng):
    left = pick(rng, SET_VARS)
    right = pick(rng, ("{}", f"{{{pick(rng, CONSTANTS)} / {pick(rng, SET_VARS)}}}",
                       f"{{{_element(rng)}}}"))
    return f"{left} = {right}"


def forall_conjunct(rng):
    inner = _filter_literal(rng, 'Y')
    if rng.random() < 0.3:
        return f"foreach([Y in {_domain(rng)}, Z in {_domain(rng)}], Z =< Y)"
    return f"foreach(Y in {_domain(rng)}, {inner})"


def exists_conjunct(rng):
    inner = _filter_literal(rng, 'Y')
    if rng.random() < 0.3:
        return f"exists([Y in {_domain(rng)}, Z in {_domain(rng)}], Y neq Z)"
    return f"exists(Y in {_domain(rng)}, {inner})"


def exists_forall_conjunct(rng):
    return f"exists(Y in {_domain(rng)}, foreach(Z in {_domain(rng)}, Z =< Y))"


def forall_exists_conjunct(rng):
    """foreach over S (or a ground set) with the exists over T, so no loop closes"""
    outer = pick(rng, ("S", "{0,1}", "{1 / S}"))
    inner = pick(rng, ("T", "{2 / T}", "{0,2}"))
    return f"foreach(Y in {outer}, exists(Z in {inner}, Z {pick(rng, ('=', '=<', 'neq'))} Y))"


_QUANTIFIED = {
    'PhiForall': [forall_conjunct],
    'PhiExists': [exists_conjunct],
    'PhiExistsForall': [forall_conjunct, exists_conjunct, exists_forall_conjunct],
    'PhiForallExists': [forall_exists_conjunct],
}


def fragment_formula(rng, fragment):
    """Conjunction of one to three quantified conjuncts plus plain constraints"""
    makers = _QUANTIFIED[fragment]
    parts = [pick(rng, makers)(rng) for _ in range(int(rng.integers(1, 3)))]
    for _ in range(int(rng.integers(0, 3))):
        kind = int(rng.integers(3))
        if fragment == 'PhiForallExists':
            # memberships only over T keep the formula loop free
            parts.append(f"{_element(rng)} {pick(rng, ('in', 'nin'))} {pick(rng, ('T', '{1 / T}'))}"
                         if kind == 0 else _theory_literal(rng))
        elif kind == 0:
            parts.append(_membership(rng))
        elif kind == 1:
            parts.append(_theory_literal(rng))
        else:
            parts.append(_set_equation(rng))
    if rng.random() < 0.2 and len(parts) > 1:
        return " & ".join(parts[:-1]) + f" & ({parts[-1]} or X = 1)"
    return " & ".join(parts)


# --------------------------------------------------------- surface formulas

_VAR_NAMES = ('A', 'B', 'X', 'Y', 'Z')


def random_element_term(rng, depth=0):
    kind = int(rng.integers(5 if depth < 2 else 3))
    if kind == 0:
        return Var(pick(rng, _VAR_NAMES))
    if kind == 1:
        return Const(int(rng.integers(-3, 4)))
    if kind == 2:
        return Const(pick(rng, ('a', 'b', 'c')))
    if kind == 3:
        return Pair(random_element_term(rng, depth + 1), random_element_term(rng, depth + 1))
    return App(pick(rng, ('+', '*')), (Var(pick(rng, _VAR_NAMES)), Const(int(rng.integers(0, 4)))))


def random_set_term(rng):
    kind = int(rng.integers(3))
    if kind == 0:
        return EMPTY
    if kind == 1:
        return Var(pick(rng, _VAR_NAMES))
    elems = [random_element_term(rng, 1) for _ in range(int(rng.integers(1, 3)))]
    tail = pick(rng, (EMPTY, Var(pick(rng, _VAR_NAMES))))
    return ext(elems, tail)


def _atomic(rng):
    kind = int(rng.integers(6))
    if kind == 0:
        return In(random_element_term(rng), random_set_term(rng))
    if kind == 1:
        return NotIn(random_element_term(rng), random_set_term(rng))
    if kind == 2:
        left = random_set_term(rng)
        right = random_set_term(rng)
        if isinstance(left, Var) and isinstance(right, Var):
            return SetEq(left, right)
        return SetEq(left if not isinstance(left, Var) else right,
                     right if not isinstance(left, Var) else left)
    if kind == 3:
        op = pick(rng, ('neq', '=<', '<', '>=', '>'))
        return TheoryLit(op, (random_element_term(rng), random_element_term(rng)))
    if kind == 4:
        return TheoryLit('=', (Var(pick(rng, _VAR_NAMES)), Const(int(rng.integers(0, 3)))))
    return pick(rng, (TRUE, FALSE))


def random_surface_formula(rng, depth=0):
    """Formula in the canonical shape the parser produces"""
    if depth >= 3:
        return _atomic(rng)
    kind = int(rng.integers(8))
    if kind <= 2:
        return _atomic(rng)
    if kind == 3:
        items = [random_surface_formula(rng, depth + 1) for _ in range(2)]
        return And(tuple(i for item in items for i in (item.items if isinstance(item, And) else (item,))))
    if kind == 4:
        items = [random_surface_formula(rng, depth + 1) for _ in range(2)]
        return Or(tuple(i for item in items for i in (item.items if isinstance(item, Or) else (item,))))
    if kind == 5:
        return Neg(random_surface_formula(rng, depth + 1))
    if kind == 6:
        return Implies(random_surface_formula(rng, depth + 1), random_surface_formula(rng, depth + 1))
    cls = pick(rng, (Foreach, Exists))
    ctrl = pick(rng, (Var('X'), Pair(Var('X'), Var('Y'))))
    return cls(ctrl, random_set_term(rng), random_surface_formula(rng, depth + 1))


__all__ = [
    'CONSTANTS', 'fragment_formula', 'random_surface_formula',
    'random_element_term', 'random_set_term', 'Sort',
]
