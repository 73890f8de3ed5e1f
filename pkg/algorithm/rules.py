"""Rewrite rules for RQ-constraints, membership and set equality

Rule ids in traces:

     1-3   A subset {X : A | phi}   (empty, cons, variable domain)
     4-6   a in A                   (empty, cons, variable)
     7-14  set equality             (13 is tail absorption A = {a / A})
     nin   a nin A
     X=    element equality handled structurally (pairs, variables)
     Xneq  element disequality between pairs
     OR    disjunction
     sort  sort constraint dropped

Every rule returns a RuleResult: a rewrite into one or more alternatives,
`irreducible`, or `fail`. step() applies rules to the leftmost rewritable
constraint until a fixpoint, a choice point or false is reached.
"""

import logging
from dataclasses import dataclass
from typing import List, Tuple

from algorithm.solver_state import SolverState
from algorithm.sorts import check_constraints
from analysis.desugar import desugar
from models.substitution import (
    FreshSupply, apply_subst, free_vars, fresh_var, fresh_like,
)
from models.terms import (
    Sort, Var, Const, Pair, App, Empty, Ext, Truth, And, Or, SetEq, In, NotIn,
    Subset, IsSet, IsX, TheoryLit, Foreach, Exists, Ris, conj, conjuncts, ext,
    split_ext, tail_of, occurs_in_tail,
)
from ui.printer import pretty

logger = logging.getLogger(__name__)
trace_logger = logging.getLogger('rq_solve.trace')

REWRITE = 'rewrite'
IRREDUCIBLE = 'irreducible'
FAIL = 'fail'


@dataclass(frozen=True)
class Alternative:
    """One way to continue: constraints replacing the rewritten one, plus bindings"""
    constraints: Tuple = ()
    bindings: Tuple = ()


@dataclass(frozen=True)
class RuleResult:
    outcome: str
    rule: str = ''
    alternatives: Tuple[Alternative, ...] = ()


@dataclass
class ChoicePoint:
    """Alternatives of a disjunctive rule, explored depth-first left to right"""
    alternatives: List[SolverState]
    rule: str = ''


@dataclass
class BudgetExhausted:
    state: SolverState


def _rewrite(rule, *constraints, bindings=()):
    return RuleResult(REWRITE, rule, (Alternative(tuple(constraints), tuple(bindings)),))


def _choice(rule, *alternatives):
    return RuleResult(REWRITE, rule, tuple(Alternative(tuple(a)) for a in alternatives))


def _fail(rule):
    return RuleResult(FAIL, rule)


def _irreducible(rule):
    return RuleResult(IRREDUCIBLE, rule)


def _x_eq(a, b):
    return TheoryLit('=', (a, b))


def _x_neq(a, b):
    return TheoryLit('neq', (a, b))


# ------------------------------------------------------------- RQ-constraints

def instantiate(ris, elem, supply=None):
    """Filter of a RIS at one domain element.

    The control term is matched against the element; a variable element
    facing a pair control term is bound to a pair of fresh variables.
    Locals are renamed fresh. Returns (core formula, bindings), or None
    when the element cannot have the control term's shape.
    """
    match = {}
    bindings = {}

    def unify(ctrl, t):
        if isinstance(ctrl, Var):
            match[ctrl] = t
            return True
        if isinstance(t, Pair):
            return unify(ctrl.left, t.left) and unify(ctrl.right, t.right)
        if isinstance(t, Var):
            if t not in bindings:
                bindings[t] = fresh_like(ctrl, supply)
            return unify(ctrl, bindings[t])
        return False

    if not unify(ris.ctrl, elem):
        return None
    renaming = dict(match)
    for v in ris.locals:
        renaming[v] = fresh_var(v.sort, supply)
    body = apply_subst(renaming, conj(ris.fpreds, ris.filter), supply)
    return desugar(body, supply=supply), tuple(bindings.items())


def rewrite_subset(c, st, supply=None):
    dom = c.dom
    if isinstance(dom, Empty):
        return _rewrite('1')
    if isinstance(dom, Var):
        return _irreducible('3')
    if isinstance(dom, Ext):
        ris = c.ris
        instance = instantiate(ris, dom.elem, supply)
        if instance is None:
            return _fail('2')
        body, bindings = instance
        rest = Subset(dom.rest, Ris(ris.ctrl, dom.rest, ris.filter, ris.locals, ris.fpreds))
        return _rewrite('2', *conjuncts(body), rest, bindings=bindings)
    raise TypeError(f"subset domain is not a set term: {dom!r}")


# ----------------------------------------------------------------- membership

def rewrite_membership(c, st, supply=None):
    s = c.set
    if isinstance(c, In):
        if isinstance(s, Empty):
            return _fail('4')
        if isinstance(s, Ext):
            return _choice('5', [_x_eq(c.elem, s.elem)], [In(c.elem, s.rest)])
        if isinstance(s, Var):
            return _rewrite('6', SetEq(s, Ext(c.elem, fresh_var(Sort.SET, supply))))
    else:
        if isinstance(s, Empty):
            return _rewrite('nin')
        if isinstance(s, Ext):
            return _rewrite('nin', _x_neq(c.elem, s.elem), NotIn(c.elem, s.rest))
        if isinstance(s, Var):
            return _irreducible('nin')
    raise TypeError(f"membership in a non-extensional set: {s!r}")


# ------------------------------------------------------------------- equality

def _occurs_elsewhere(v, c, st):
    """v occurs in a constraint besides c (which mentions it) or in a binding"""
    return st.occurrences()[v] > 1 or v in st.binding_vars


def rewrite_equality(c, st, supply=None):
    left, right = c.left, c.right
    if isinstance(left, Empty) and isinstance(right, Empty):
        return _rewrite('7')
    if isinstance(left, Var) and left == right:
        return _rewrite('8')
    if not isinstance(left, Var) and isinstance(right, Var):
        return _rewrite('9', SetEq(right, left))
    if isinstance(left, Var):
        if occurs_in_tail(left, right):
            elems, _ = split_ext(right)
            return _rewrite('13', SetEq(left, ext(elems, fresh_var(Sort.SET, supply))))
        if _occurs_elsewhere(left, c, st):
            return _rewrite('10', bindings=((left, right),))
        return _irreducible('14')
    if isinstance(left, Ext) and isinstance(right, Ext):
        tail = tail_of(left)
        if isinstance(tail, Var) and tail == tail_of(right):
            return _same_tail(left, right, tail, supply)
        a, rest_a, b, rest_b = left.elem, left.rest, right.elem, right.rest
        n = fresh_var(Sort.SET, supply)
        return _choice(
            '12',
            [_x_eq(a, b), SetEq(rest_a, rest_b)],
            [_x_eq(a, b), SetEq(left, rest_b)],
            [_x_eq(a, b), SetEq(rest_a, right)],
            [SetEq(rest_a, Ext(b, n)), SetEq(rest_b, Ext(a, n))],
        )
    if isinstance(left, (Ext, Empty)) and isinstance(right, (Ext, Empty)):
        return _fail('11')
    raise TypeError(f"set equality between unexpected terms: {c!r}")


def _same_tail(left, right, tail, supply):
    """{t0,..,tm / X} = {s0,..,sn / X}"""
    ts, _ = split_ext(left)
    ss, _ = split_ext(right)
    t0, t_rest = ts[0], ts[1:]
    alternatives = []
    for j, sj in enumerate(ss):
        s_rest = ss[:j] + ss[j + 1:]
        alternatives.append([_x_eq(t0, sj), SetEq(ext(t_rest, tail), ext(s_rest, tail))])
        alternatives.append([_x_eq(t0, sj), SetEq(ext(ts, tail), ext(s_rest, tail))])
        alternatives.append([_x_eq(t0, sj), SetEq(ext(t_rest, tail), ext(ss, tail))])
    n = fresh_var(Sort.SET, supply)
    alternatives.append([SetEq(tail, Ext(t0, n)), SetEq(ext(t_rest, n), ext(ss, n))])
    return _choice('12', *alternatives)


# ---------------------------------------------------------- element literals

def rewrite_x(c, st, supply=None):
    if len(c.args) == 2 and c.pred == '=':
        return _x_equality(*c.args)
    if len(c.args) == 2 and c.pred == 'neq':
        return _x_disequality(*c.args)
    return _irreducible('X')


def _x_equality(left, right):
    if left == right:
        return _rewrite('X=')
    if isinstance(left, Const) and isinstance(right, Const):
        return _fail('X=')
    if isinstance(left, Pair) and isinstance(right, Pair):
        return _rewrite('X=', _x_eq(left.left, right.left), _x_eq(left.right, right.right))
    if isinstance(left, Pair) and isinstance(right, (Const, App)):
        return _fail('X=')
    if isinstance(right, Pair) and isinstance(left, (Const, App)):
        return _fail('X=')
    if isinstance(left, Var) and isinstance(right, Var):
        if right.is_fresh and not left.is_fresh:
            return _rewrite('X=', bindings=((right, left),))
        return _rewrite('X=', bindings=((left, right),))
    for v, t in ((left, right), (right, left)):
        if isinstance(v, Var) and isinstance(t, Pair):
            if v in free_vars(t):
                return _fail('X=')
            return _rewrite('X=', bindings=((v, t),))
    return _irreducible('X')


def _x_disequality(left, right):
    if left == right:
        return _fail('Xneq')
    if isinstance(left, Const) and isinstance(right, Const):
        return _rewrite('Xneq')
    if isinstance(left, Pair) and isinstance(right, Pair):
        return _choice('Xneq', [_x_neq(left.left, right.left)], [_x_neq(left.right, right.right)])
    if isinstance(left, Pair) and isinstance(right, (Const, App)):
        return _rewrite('Xneq')
    if isinstance(right, Pair) and isinstance(left, (Const, App)):
        return _rewrite('Xneq')
    return _irreducible('X')


# ------------------------------------------------------------------- dispatch

def rewrite_constraint(c, st, supply=None):
    if isinstance(c, Subset):
        return rewrite_subset(c, st, supply)
    if isinstance(c, (In, NotIn)):
        return rewrite_membership(c, st, supply)
    if isinstance(c, SetEq):
        return rewrite_equality(c, st, supply)
    if isinstance(c, TheoryLit):
        return rewrite_x(c, st, supply)
    if isinstance(c, Or):
        return _choice('OR', *[conjuncts(item) for item in c.items])
    if isinstance(c, And):
        return _rewrite('AND', *c.items)
    if isinstance(c, Truth):
        return _rewrite('true') if c.value else _fail('false')
    if isinstance(c, (IsSet, IsX)):
        return _rewrite('sort')
    if isinstance(c, (Foreach, Exists)):
        return _rewrite('desugar', *conjuncts(desugar(c, supply=supply)))
    raise TypeError(f"no rewrite rule for {c!r}")


def select_rule(st, supply=None):
    """(index, constraint, result) for the leftmost rewritable constraint, or None"""
    for i, c in enumerate(st.constraints):
        result = rewrite_constraint(c, st, supply)
        if result.outcome != IRREDUCIBLE:
            return i, c, result
    return None


def successor(st, index, alternative, supply=None):
    """State after replacing constraint `index` by an alternative; False if it is false"""
    new = []
    for c in alternative.constraints:
        for item in conjuncts(c):
            if item == Truth(False):
                return False
            new.append(item)
    if not check_constraints(new + [SetEq(v, t) for v, t in alternative.bindings
                                    if v.sort is Sort.SET]):
        return False
    constraints = st.constraints[:index] + new + st.constraints[index + 1:]
    bindings, binding_vars = st.bindings, st.binding_vars
    if alternative.bindings:
        bindings = dict(bindings)
    for v, t in alternative.bindings:
        single = {v: t}
        constraints = [apply_subst(single, c, supply) for c in constraints]
        bindings[v] = t
        binding_vars = binding_vars | free_vars(t)
    return SolverState(
        constraints=constraints,
        bindings=bindings,
        binding_vars=binding_vars,
        steps=st.steps + 1,
        trace=None if st.trace is None else list(st.trace),
    )


def describe(result):
    """Right-hand side of a trace line"""
    if result.outcome == FAIL:
        return "false"
    parts = []
    for alt in result.alternatives:
        items = [f"{v} := {pretty(t)}" for v, t in alt.bindings]
        items += [pretty(c) for c in alt.constraints]
        text = " & ".join(items) if items else "true"
        parts.append(f"({text})" if len(result.alternatives) > 1 and len(items) > 1 else text)
    return " or ".join(parts)


def _record(st, c, result):
    line = f"{result.rule} {pretty(c)} ==> {describe(result)}"
    st.log(line)
    if trace_logger.isEnabledFor(logging.INFO):
        trace_logger.info(line)


def _prunable(lits):
    return [lit for lit in lits if not any(isinstance(a, Pair) for a in lit.args)]


def step(st, theory=None, budget=None, supply=None, meter=None):
    """Rewrite until no rule applies, a disjunctive rule fires or false is reached.

    Returns the fixpoint state, a ChoicePoint, False, or BudgetExhausted
    when the branch has used `budget` rule applications.
    """
    if st is False:
        return False
    if supply is None:
        supply = FreshSupply.above(*st.constraints, *st.bindings, *st.bindings.values())
    while True:
        found = select_rule(st, supply)
        if found is None:
            return st
        if budget is not None and st.steps >= budget:
            return BudgetExhausted(st)
        index, c, result = found
        if meter is not None:
            meter.tick()
        _record(st, c, result)
        if result.outcome == FAIL:
            return False
        successors = [successor(st, index, alt, supply) for alt in result.alternatives]
        successors = [s for s in successors if s is not False]
        if not successors:
            return False
        if len(successors) == 1:
            st = successors[0]
            continue
        if theory is not None and not theory.sat_x(_prunable(st.pending_x)):
            logger.debug("pruned choice point at rule %s: theory literals unsat", result.rule)
            return False
        logger.debug("choice point at rule %s with %d alternatives", result.rule, len(successors))
        return ChoicePoint(successors, result.rule)


def is_irreducible(st):
    """True iff the state is in solved form.

    Set constraints must be `A = t` with A occurring nowhere else,
    `A subset {X : A | phi}` over a variable A, or `a nin A` over a
    variable A; element literals must be left to the theory.
    """
    if st is False:
        return False
    for c in st.constraints:
        if isinstance(c, SetEq):
            if not (isinstance(c.left, Var) and not occurs_in_tail(c.left, c.right)
                    and not _occurs_elsewhere(c.left, c, st)):
                return False
        elif isinstance(c, Subset):
            if not (isinstance(c.dom, Var) and c.ris.dom == c.dom):
                return False
        elif isinstance(c, NotIn):
            if not isinstance(c.set, Var):
                return False
        elif isinstance(c, TheoryLit):
            if rewrite_x(c, st).outcome != IRREDUCIBLE:
                return False
        else:
            return False
    return True
