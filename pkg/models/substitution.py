"""Substitution, free variables and the fresh-variable supply"""

import itertools
import threading
from dataclasses import fields, is_dataclass
from typing import Dict

from config.constants import FRESH_PREFIX
from models.terms import (
    Var, Const, Pair, App, Empty, Ext, Ris, Truth, And, Or, SetEq, In, NotIn,
    Subset, IsSet, IsX, TheoryLit, Call, Neg, Implies, Foreach, Exists,
    ctrl_vars,
)

Substitution = Dict[Var, object]


class FreshSupply:
    """Thread-safe counter handing out generated variables for one session"""

    def __init__(self, start=1):
        self._counter = itertools.count(start)
        self._lock = threading.Lock()

    @classmethod
    def above(cls, *terms):
        """Supply whose ids are all larger than any generated variable in terms"""
        return cls(max_fresh_id(*terms) + 1)

    def fresh_var(self, sort):
        with self._lock:
            fresh_id = next(self._counter)
        return Var(FRESH_PREFIX, sort, fresh_id)

    def fresh_like(self, ctrl):
        """Copy of a control term with every variable replaced by a fresh one"""
        if isinstance(ctrl, Var):
            return self.fresh_var(ctrl.sort)
        return Pair(self.fresh_like(ctrl.left), self.fresh_like(ctrl.right))


_default_supply = FreshSupply()


def fresh_var(sort, supply=None):
    """Return a variable distinct from every user and previously issued variable"""
    return (supply or _default_supply).fresh_var(sort)


def fresh_like(ctrl, supply=None):
    return (supply or _default_supply).fresh_like(ctrl)


def subterms(node):
    """Every term and formula node below node, node first"""
    yield node
    if is_dataclass(node):
        for f in fields(node):
            value = getattr(node, f.name)
            for item in value if isinstance(value, tuple) else (value,):
                if is_dataclass(item):
                    yield from subterms(item)


def max_fresh_id(*terms):
    """Largest fresh id occurring in terms, 0 when there is none"""
    return max((n.fresh_id for t in terms for n in subterms(t)
                if isinstance(n, Var) and n.is_fresh), default=0)


def free_vars(t):
    """Free variables of a term or formula"""
    found = {}
    _collect_free(t, frozenset(), found)
    return set(found)


def ordered_free_vars(t):
    """Free variables in order of first occurrence"""
    found = {}
    _collect_free(t, frozenset(), found)
    return list(found)


def _collect_free(t, bound, found):
    if isinstance(t, Var):
        if t not in bound:
            found[t] = None
    elif isinstance(t, (Const, Empty, Truth)):
        return
    elif isinstance(t, Pair):
        _collect_free(t.left, bound, found)
        _collect_free(t.right, bound, found)
    elif isinstance(t, (App, TheoryLit, Call)):
        for a in t.args:
            _collect_free(a, bound, found)
    elif isinstance(t, Ext):
        _collect_free(t.elem, bound, found)
        _collect_free(t.rest, bound, found)
    elif isinstance(t, (Ris, Foreach, Exists)):
        _collect_free(t.dom, bound, found)
        inner = bound | frozenset(ctrl_vars(t.ctrl)) | frozenset(t.locals)
        _collect_free(t.filter, inner, found)
        _collect_free(t.fpreds, inner, found)
    elif isinstance(t, (And, Or)):
        for item in t.items:
            _collect_free(item, bound, found)
    elif isinstance(t, (SetEq,)):
        _collect_free(t.left, bound, found)
        _collect_free(t.right, bound, found)
    elif isinstance(t, (In, NotIn)):
        _collect_free(t.elem, bound, found)
        _collect_free(t.set, bound, found)
    elif isinstance(t, Subset):
        _collect_free(t.dom, bound, found)
        _collect_free(t.ris, bound, found)
    elif isinstance(t, (IsSet, IsX)):
        _collect_free(t.term, bound, found)
    elif isinstance(t, Neg):
        _collect_free(t.body, bound, found)
    elif isinstance(t, Implies):
        _collect_free(t.lhs, bound, found)
        _collect_free(t.rhs, bound, found)
    else:
        raise TypeError(f"not a term or formula: {t!r}")


def apply_subst(s, t, supply=None):
    """Apply substitution s to t.

    Variables bound by a RIS or quantifier (control variables and locals)
    are never replaced. When the range of s would be captured by such a
    binder, the bound variables are renamed fresh first.
    """
    if not s:
        return t
    if isinstance(t, Var):
        return s.get(t, t)
    if isinstance(t, (Const, Empty, Truth)):
        return t
    if isinstance(t, Pair):
        return Pair(apply_subst(s, t.left, supply), apply_subst(s, t.right, supply))
    if isinstance(t, App):
        return App(t.fn, tuple(apply_subst(s, a, supply) for a in t.args))
    if isinstance(t, Ext):
        return Ext(apply_subst(s, t.elem, supply), apply_subst(s, t.rest, supply))
    if isinstance(t, (Ris, Foreach, Exists)):
        return _subst_binder(s, t, supply)
    if isinstance(t, And):
        return And(tuple(apply_subst(s, f, supply) for f in t.items))
    if isinstance(t, Or):
        return Or(tuple(apply_subst(s, f, supply) for f in t.items))
    if isinstance(t, SetEq):
        return SetEq(apply_subst(s, t.left, supply), apply_subst(s, t.right, supply))
    if isinstance(t, In):
        return In(apply_subst(s, t.elem, supply), apply_subst(s, t.set, supply))
    if isinstance(t, NotIn):
        return NotIn(apply_subst(s, t.elem, supply), apply_subst(s, t.set, supply))
    if isinstance(t, Subset):
        return Subset(apply_subst(s, t.dom, supply), apply_subst(s, t.ris, supply))
    if isinstance(t, IsSet):
        return IsSet(apply_subst(s, t.term, supply))
    if isinstance(t, IsX):
        return IsX(apply_subst(s, t.term, supply))
    if isinstance(t, TheoryLit):
        return TheoryLit(t.pred, tuple(apply_subst(s, a, supply) for a in t.args))
    if isinstance(t, Call):
        return Call(t.name, tuple(apply_subst(s, a, supply) for a in t.args))
    if isinstance(t, Neg):
        return Neg(apply_subst(s, t.body, supply))
    if isinstance(t, Implies):
        return Implies(apply_subst(s, t.lhs, supply), apply_subst(s, t.rhs, supply))
    raise TypeError(f"not a term or formula: {t!r}")


def _subst_binder(s, t, supply):
    dom = apply_subst(s, t.dom, supply)
    bound = set(ctrl_vars(t.ctrl)) | set(t.locals)
    inner = {v: r for v, r in s.items() if v not in bound}
    ctrl, locals_, filter_, fpreds = t.ctrl, t.locals, t.filter, t.fpreds
    if inner:
        body_free = free_vars(filter_) | free_vars(fpreds)
        relevant = {v: r for v, r in inner.items() if v in body_free}
        range_free = set()
        for r in relevant.values():
            range_free |= free_vars(r)
        clashes = bound & range_free
        if clashes:
            renaming = {v: fresh_var(v.sort, supply) for v in clashes}
            ctrl = apply_subst(renaming, ctrl)
            locals_ = tuple(renaming.get(v, v) for v in locals_)
            filter_ = apply_subst(renaming, filter_, supply)
            fpreds = apply_subst(renaming, fpreds, supply)
        filter_ = apply_subst(inner, filter_, supply)
        fpreds = apply_subst(inner, fpreds, supply)
    return type(t)(ctrl, dom, filter_, locals_, fpreds)


def resolve(t, bindings, supply=None):
    """t with triangular bindings applied until no bound variable is left"""
    while True:
        pending = {v: bindings[v] for v in free_vars(t) if v in bindings}
        if not pending:
            return t
        t = apply_subst(pending, t, supply)
