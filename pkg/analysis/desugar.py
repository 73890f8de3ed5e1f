"""Negation elimination and desugaring of foreach/exists into core constraints

    foreach(X in A, phi)          ->  subset(A, {X : A | phi})
    exists(X in A, phi)           ->  N in A & phi[X := N]           (N fresh)
    foreach(X in A, [E], phi, psi) -> subset with an extended RIS
    exists(X in A, [E], phi, psi)  ->  N in A & psi' & phi'          (N, E fresh)

RIS filters are kept in surface form; the rewrite rules desugar each
instance of a filter when they iterate over a domain element.
"""

from models.errors import NegationError, DesugarError
from models.substitution import apply_subst, fresh_var, fresh_like
from models.terms import (
    Truth, TRUE, FALSE, And, Or, SetEq, In, NotIn, Subset, IsSet, IsX, TheoryLit,
    Call, Neg, Implies, Foreach, Exists, Ris, conj, disj, conjuncts, ctrl_vars,
)
from ui.printer import pretty


def _default_theory():
    from config.constants import DEFAULT_THEORY
    from config.theories import load_theory

    return load_theory(DEFAULT_THEORY)


# ------------------------------------------------------------------ negation

def negate(f, theory=None):
    """Negation of a surface formula, pushed down to the literals.

    Raises:
        NegationError: for set equalities, subset constraints, sort atoms
            and unexpanded calls, whose negation the solver cannot express
    """
    theory = theory or _default_theory()
    return _negate(f, theory)


def _negate(f, theory):
    if isinstance(f, Truth):
        return FALSE if f.value else TRUE
    if isinstance(f, And):
        return Or(tuple(_negate(item, theory) for item in f.items))
    if isinstance(f, Or):
        return And(tuple(_negate(item, theory) for item in f.items))
    if isinstance(f, In):
        return NotIn(f.elem, f.set)
    if isinstance(f, NotIn):
        return In(f.elem, f.set)
    if isinstance(f, TheoryLit):
        return theory.negate_lit(f)
    if isinstance(f, Foreach):
        return Exists(f.ctrl, f.dom, _negate(f.filter, theory), f.locals,
                      _normalize(f.fpreds, theory))
    if isinstance(f, Exists):
        return Foreach(f.ctrl, f.dom, _negate(f.filter, theory), f.locals,
                       _normalize(f.fpreds, theory))
    if isinstance(f, Neg):
        return _normalize(f.body, theory)
    if isinstance(f, Implies):
        return _and2(_normalize(f.lhs, theory), _negate(f.rhs, theory))
    if isinstance(f, SetEq):
        raise NegationError(
            f"cannot negate set equality '{pretty(f)}': set disequality is outside "
            "the restricted-quantifier language"
        )
    if isinstance(f, Subset):
        raise NegationError(
            f"cannot negate '{pretty(f)}': only subset constraints written as foreach "
            "quantifiers over their own domain can be negated"
        )
    if isinstance(f, (IsSet, IsX)):
        raise NegationError(f"cannot negate sort constraint '{pretty(f)}'")
    if isinstance(f, Call):
        raise NegationError(f"cannot negate unexpanded call '{pretty(f)}'")
    raise TypeError(f"not a formula: {f!r}")


def _and2(a, b):
    items = []
    for f in (a, b):
        items.extend(f.items if isinstance(f, And) else [f])
    return And(tuple(items))


def normalize(f, theory=None):
    """Eliminate neg and implies everywhere, including inside quantifier filters"""
    theory = theory or _default_theory()
    return _normalize(f, theory)


def _normalize(f, theory):
    if isinstance(f, Neg):
        return _negate(f.body, theory)
    if isinstance(f, Implies):
        lhs = _negate(f.lhs, theory)
        rhs = _normalize(f.rhs, theory)
        items = []
        for g in (lhs, rhs):
            items.extend(g.items if isinstance(g, Or) else [g])
        return Or(tuple(items))
    if isinstance(f, And):
        return And(tuple(_normalize(item, theory) for item in f.items))
    if isinstance(f, Or):
        return Or(tuple(_normalize(item, theory) for item in f.items))
    if isinstance(f, (Foreach, Exists)):
        return type(f)(f.ctrl, f.dom, _normalize(f.filter, theory), f.locals,
                       _normalize(f.fpreds, theory))
    if isinstance(f, Subset):
        r = f.ris
        return Subset(f.dom, Ris(r.ctrl, r.dom, _normalize(r.filter, theory), r.locals,
                                 _normalize(r.fpreds, theory)))
    return f


# ---------------------------------------------------------------- desugaring

def check_functional(f, theory):
    """Every fpreds conjunct of an extended quantifier must be a functional predicate.

    Raises:
        DesugarError: naming the offending literal
    """
    for q in _binders(f):
        for lit in conjuncts(q.fpreds):
            if not (isinstance(lit, TheoryLit) and theory.is_functional(lit.pred)):
                raise DesugarError(
                    f"'{pretty(lit)}' is not a functional predicate; the predicates binding "
                    f"local variables must be functional (theory '{theory.name}' provides: "
                    f"{', '.join(sorted(theory.functional)) or 'none'})"
                )


def _binders(f):
    if isinstance(f, (Foreach, Exists)):
        yield f
        yield from _binders(f.filter)
        yield from _binders(f.fpreds)
    elif isinstance(f, Subset):
        yield f.ris
        yield from _binders(f.ris.filter)
    elif isinstance(f, (And, Or)):
        for item in f.items:
            yield from _binders(item)
    elif isinstance(f, Neg):
        yield from _binders(f.body)
    elif isinstance(f, Implies):
        yield from _binders(f.lhs)
        yield from _binders(f.rhs)


def desugar(f, theory=None, supply=None):
    """Core formula equivalent to a surface formula.

    neg and implies are eliminated first; with a theory, the functional
    requirement on extended quantifiers is checked.
    """
    if theory is not None:
        check_functional(f, theory)
    if _has_negation(f):
        f = normalize(f, theory)
    return _desugar(f, supply)


def _has_negation(f):
    if isinstance(f, (Neg, Implies)):
        return True
    if isinstance(f, (And, Or)):
        return any(_has_negation(item) for item in f.items)
    if isinstance(f, (Foreach, Exists)):
        return _has_negation(f.filter) or _has_negation(f.fpreds)
    if isinstance(f, Subset):
        return _has_negation(f.ris.filter)
    return False


def _desugar(f, supply):
    if isinstance(f, And):
        return conj(*[_desugar(item, supply) for item in f.items])
    if isinstance(f, Or):
        return disj(*[_desugar(item, supply) for item in f.items])
    if isinstance(f, Foreach):
        return Subset(f.dom, Ris(f.ctrl, f.dom, f.filter, f.locals, f.fpreds))
    if isinstance(f, Exists):
        witness = fresh_like(f.ctrl, supply)
        renaming = dict(zip(ctrl_vars(f.ctrl), ctrl_vars(witness)))
        for v in f.locals:
            renaming[v] = fresh_var(v.sort, supply)
        body = conj(apply_subst(renaming, f.fpreds, supply),
                    apply_subst(renaming, f.filter, supply))
        return conj(In(witness, f.dom), _desugar(body, supply))
    if isinstance(f, Call):
        raise DesugarError(f"call to '{f.name}' was not expanded")
    if isinstance(f, (Neg, Implies)):
        raise DesugarError("negation must be eliminated before desugaring")
    return f
