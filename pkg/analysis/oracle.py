"""Reference semantics: evaluate formulas on concrete values, enumerate models

The evaluator recurses directly on the formula (quantifier filters
included) and never uses the rewrite rules, so it can be used to check
the solver.
"""

import itertools
import logging
import math

from algorithm.sorts import resolve_sorts
from config.constants import MAX_ENUMERATION
from models.errors import OracleError
from models.substitution import ordered_free_vars
from models.terms import (
    Sort, Var, Const, Pair, App, Empty, Ext, Ris, Truth, And, Or, SetEq, In,
    NotIn, Subset, IsSet, IsX, TheoryLit, Call, Neg, Implies, Foreach, Exists,
    conjuncts, var_key,
)
from models.values import Universe, is_set, is_pair, value_key

logger = logging.getLogger(__name__)


class Environment(dict):
    """Values by variable; a variable is matched on name and fresh id, not sort"""

    def __init__(self, values=()):
        super().__init__()
        for v, value in dict(values).items():
            self[v] = value

    @staticmethod
    def _key(v):
        return (v.name, v.fresh_id)

    def __setitem__(self, v, value):
        super().__setitem__(self._key(v), value)

    def __getitem__(self, v):
        return super().__getitem__(self._key(v))

    def __contains__(self, v):
        return super().__contains__(self._key(v))

    def extended(self, values):
        env = Environment()
        dict.update(env, self)
        for v, value in values.items():
            env[v] = value
        return env


# --------------------------------------------------------------- evaluation

def eval_term(t, env, theory):
    if isinstance(t, (Var, Const, Pair, App)):
        return theory.eval_term(t, env)
    if isinstance(t, Empty):
        return frozenset()
    if isinstance(t, Ext):
        rest = _set_value(t.rest, env, theory)
        return rest | {eval_term(t.elem, env, theory)}
    if isinstance(t, Ris):
        dom = _set_value(t.dom, env, theory)
        return frozenset(e for e in dom if _instance_holds(t, e, env, theory))
    raise OracleError(f"not a term: {t!r}")


def _set_value(t, env, theory):
    value = eval_term(t, env, theory)
    if not is_set(value):
        raise OracleError(f"{t} should denote a set, has value {value!r}")
    return value


def _destructure(ctrl, value, out):
    if isinstance(ctrl, Var):
        out[ctrl] = value
        return True
    if not is_pair(value):
        return False
    return _destructure(ctrl.left, value[0], out) and _destructure(ctrl.right, value[1], out)


def _instance_holds(q, element, env, theory):
    """Filter of a quantifier or RIS at one element of its domain.

    Locals are determined by the functional predicates, so the existential
    over them is computed rather than searched.
    """
    values = {}
    if not _destructure(q.ctrl, element, values):
        return False
    inner = env.extended(values)
    pending = set(q.locals)
    for lit in conjuncts(q.fpreds):
        if not isinstance(lit, TheoryLit):
            raise OracleError(f"unexpected constraint on locals: {lit!r}")
        fp = theory.fp_lookup(lit.pred)
        *inputs, result = lit.args
        args = [theory.eval_term(a, inner) for a in inputs]
        value = fp.evaluate(*args)
        if isinstance(result, Var) and result in pending:
            inner[result] = value
            pending.discard(result)
        elif theory.eval_term(result, inner) != value:
            return False
    if pending:
        names = ", ".join(str(v) for v in pending)
        raise OracleError(f"locals {names} are not determined by a functional predicate")
    return eval_formula(q.filter, inner, theory)


def eval_formula(f, valuation, theory):
    """Truth value of f under a valuation mapping variables to values"""
    env = valuation if isinstance(valuation, Environment) else Environment(valuation)
    return _eval(f, env, theory)


def _eval(f, env, theory):
    if isinstance(f, Truth):
        return f.value
    if isinstance(f, And):
        return all(_eval(item, env, theory) for item in f.items)
    if isinstance(f, Or):
        return any(_eval(item, env, theory) for item in f.items)
    if isinstance(f, Neg):
        return not _eval(f.body, env, theory)
    if isinstance(f, Implies):
        return not _eval(f.lhs, env, theory) or _eval(f.rhs, env, theory)
    if isinstance(f, SetEq):
        return eval_term(f.left, env, theory) == eval_term(f.right, env, theory)
    if isinstance(f, In):
        return eval_term(f.elem, env, theory) in _set_value(f.set, env, theory)
    if isinstance(f, NotIn):
        return eval_term(f.elem, env, theory) not in _set_value(f.set, env, theory)
    if isinstance(f, Subset):
        return _set_value(f.dom, env, theory) <= _set_value(f.ris, env, theory)
    if isinstance(f, IsSet):
        return is_set(eval_term(f.term, env, theory))
    if isinstance(f, IsX):
        return not is_set(eval_term(f.term, env, theory))
    if isinstance(f, TheoryLit):
        return theory.evaluate(f, env)
    if isinstance(f, Foreach):
        dom = _set_value(f.dom, env, theory)
        return all(_instance_holds(f, e, env, theory) for e in dom)
    if isinstance(f, Exists):
        dom = _set_value(f.dom, env, theory)
        return any(_instance_holds(f, e, env, theory) for e in dom)
    if isinstance(f, Call):
        raise OracleError(f"call to '{f.name}' must be expanded before evaluation")
    raise OracleError(f"not a formula: {f!r}")


# -------------------------------------------------------------- enumeration

def element_pool(theory, universe):
    pool = list(theory.element_values(universe))
    if universe.with_pairs:
        base = list(pool)
        pool += [(a, b) for a in base for b in base]
    return sorted(pool, key=value_key)


def set_pool(elements, max_card):
    """Sets over elements by cardinality, then lexicographically"""
    out = []
    for k in range(max_card + 1):
        out.extend(frozenset(c) for c in itertools.combinations(elements, k))
    return out


def enumerate_models(f, theory, universe=None, limit=None):
    """Every valuation of the free variables of f over the universe that satisfies f.

    Raises:
        OracleError: when the search space exceeds MAX_ENUMERATION
    """
    universe = universe or Universe()
    typed, _ = resolve_sorts(f)
    variables = sorted(ordered_free_vars(typed), key=var_key)
    elements = element_pool(theory, universe)
    sets = set_pool(elements, min(universe.max_set_card, len(elements)))
    ranges = [sets if v.sort is Sort.SET else elements for v in variables]
    size = math.prod(len(r) for r in ranges)
    if size > MAX_ENUMERATION:
        raise OracleError(
            f"{size} candidate valuations exceed the limit of {MAX_ENUMERATION}; "
            "use fewer atoms, a smaller integer range or a lower set cardinality"
        )
    logger.debug("enumerating %d valuations of %d variables", size, len(variables))
    models = []
    for combo in itertools.product(*ranges):
        valuation = dict(zip(variables, combo))
        if _eval(typed, Environment(valuation), theory):
            models.append(valuation)
            if limit is not None and len(models) >= limit:
                break
    return models


def has_model(f, theory, universe=None):
    return bool(enumerate_models(f, theory, universe, limit=1))
