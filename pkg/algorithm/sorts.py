"""Sort inference and checking

Every variable is either a set or an element. Positions fix sorts: the
right of `in`, both sides of a set equation and quantifier domains are
set positions; set elements, control terms, theory arguments and locals
are element positions. An equation between two bare variables only
says both have the same sort; if nothing else decides it, it is a set
equation.

Control variables and locals are elements within their binder and are
sorted apart from free variables of the same name.
"""

from collections import defaultdict

from models.errors import SortError
from models.terms import (
    Sort, Var, Const, Pair, App, Empty, Ext, Ris, Truth, And, Or, SetEq, In,
    NotIn, Subset, IsSet, IsX, TheoryLit, Call, Neg, Implies, Foreach, Exists,
    conj, conjuncts, ctrl_vars, var_key,
)


def _key(v):
    return (v.name, v.fresh_id)


def _binder_keys(q):
    return frozenset(_key(v) for v in ctrl_vars(q.ctrl) + list(q.locals))


class _SortCollector:
    """Walks a formula recording the sort each variable position demands"""

    def __init__(self):
        self.facts = defaultdict(set)
        self.links = []
        self.clashes = []
        self.first_seen = {}
        self.bound_seen = {}
        self.bound = frozenset()

    def var(self, v, sort):
        k = _key(v)
        if k in self.bound:
            self.bound_seen.setdefault(k, v)
            if sort is Sort.SET:
                self.clashes.append(f"quantified variable {v} used as a set")
            return
        self.first_seen.setdefault(k, v)
        if sort is not None:
            self.facts[k].add(sort)
        if v.sort is not None:
            self.facts[k].add(v.sort)

    def term(self, t, expected):
        if isinstance(t, Var):
            self.var(t, expected)
        elif isinstance(t, (Const, Pair, App)):
            if expected is Sort.SET:
                self.clashes.append(f"element term {t!r} used as a set")
            if isinstance(t, Pair):
                self.term(t.left, Sort.X)
                self.term(t.right, Sort.X)
            elif isinstance(t, App):
                for a in t.args:
                    self.term(a, Sort.X)
        elif isinstance(t, (Empty, Ext, Ris)):
            if expected is Sort.X:
                self.clashes.append(f"set term {t!r} used as an element")
            if isinstance(t, Ext):
                self.term(t.elem, Sort.X)
                self.term(t.rest, Sort.SET)
            elif isinstance(t, Ris):
                self.binder(t)
        else:
            raise TypeError(f"not a term: {t!r}")

    def binder(self, q):
        self.term(q.dom, Sort.SET)
        outer = self.bound
        self.bound = outer | _binder_keys(q)
        for v in ctrl_vars(q.ctrl) + list(q.locals):
            self.var(v, Sort.X)
        if not isinstance(q.ctrl, (Var, Pair)):
            self.clashes.append(f"control term {q.ctrl!r} is not built from variables")
        self.term(q.ctrl, Sort.X)
        self.formula(q.filter)
        self.formula(q.fpreds)
        self.bound = outer

    def formula(self, f):
        if isinstance(f, Truth):
            return
        if isinstance(f, (And, Or)):
            for item in f.items:
                self.formula(item)
        elif isinstance(f, SetEq):
            if isinstance(f.left, Var) and isinstance(f.right, Var) \
                    and {_key(f.left), _key(f.right)} & self.bound:
                self.var(f.left, Sort.X)
                self.var(f.right, Sort.X)
            elif isinstance(f.left, Var) and isinstance(f.right, Var):
                self.var(f.left, None)
                self.var(f.right, None)
                self.links.append((_key(f.left), _key(f.right)))
            else:
                self.term(f.left, Sort.SET)
                self.term(f.right, Sort.SET)
        elif isinstance(f, (In, NotIn)):
            self.term(f.elem, Sort.X)
            self.term(f.set, Sort.SET)
        elif isinstance(f, Subset):
            self.term(f.dom, Sort.SET)
            self.term(f.ris, Sort.SET)
        elif isinstance(f, IsSet):
            self.term(f.term, Sort.SET)
        elif isinstance(f, IsX):
            self.term(f.term, Sort.X)
        elif isinstance(f, TheoryLit):
            for a in f.args:
                self.term(a, Sort.X)
        elif isinstance(f, Call):
            for a in f.args:
                if isinstance(a, Var):
                    self.var(a, None)
                else:
                    self.term(a, None)
        elif isinstance(f, Neg):
            self.formula(f.body)
        elif isinstance(f, Implies):
            self.formula(f.lhs)
            self.formula(f.rhs)
        elif isinstance(f, (Foreach, Exists)):
            self.binder(f)
        else:
            raise TypeError(f"not a formula: {f!r}")

    def solve(self):
        """Return (sort table by key, list of clashing keys)"""
        parent = {k: k for k in self.first_seen}

        def find(k):
            while parent[k] != k:
                parent[k] = parent[parent[k]]
                k = parent[k]
            return k

        for a, b in self.links:
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[ra] = rb
        class_facts = defaultdict(set)
        for k in self.first_seen:
            class_facts[find(k)] |= self.facts[k]
        linked = {find(a) for a, _ in self.links}

        table, clashing = {}, []
        for k in self.first_seen:
            sorts = class_facts[find(k)]
            if len(sorts) > 1:
                clashing.append(k)
                continue
            if sorts:
                table[k] = next(iter(sorts))
            elif find(k) in linked:
                table[k] = Sort.SET
            else:
                table[k] = Sort.X
        return table, clashing


def _collect(f):
    collector = _SortCollector()
    collector.formula(f)
    return collector


def _sort_atoms(collector):
    atoms = []
    table, clashing = collector.solve()
    for k in sorted(collector.first_seen, key=lambda k: var_key(collector.first_seen[k])):
        v = collector.first_seen[k]
        if k in clashing:
            atoms.extend([IsSet(v), IsX(v)])
        elif table[k] is Sort.SET:
            atoms.append(IsSet(v))
        else:
            atoms.append(IsX(v))
    return atoms


def strip_sort_constraints(f):
    return conj(*[c for c in conjuncts(f) if not isinstance(c, (IsSet, IsX))])


def sort_infer(f):
    """Conjoin exactly one set(v) or isX(v) per free variable (two on a clash)"""
    return conj(strip_sort_constraints(f), *_sort_atoms(_collect(f)))


def sort_check(f):
    """Return f when it is well sorted, false otherwise"""
    collector = _collect(f)
    _, clashing = collector.solve()
    if clashing or collector.clashes:
        return Truth(False)
    return f


def check_constraints(constraints):
    """True when freshly generated constraints respect the variables' sorts"""
    return sort_check(conj(*constraints)) != Truth(False)


def resolve_sorts(f):
    """Give every variable its sort and drop sort constraints.

    The sorts are read off the atoms sort_infer conjoins. Equations
    between two element variables become theory equalities.

    Returns:
        (typed formula, {typed Var: Sort})

    Raises:
        SortError: naming the first variable used with both sorts
    """
    collector = _collect(f)
    table = {}
    for atom in _sort_atoms(collector):
        v = atom.term
        sort = Sort.SET if isinstance(atom, IsSet) else Sort.X
        if table.setdefault(_key(v), sort) is not sort:
            raise SortError(f"variable {v} is used both as a set and as an element")
    if collector.clashes:
        raise SortError(collector.clashes[0])
    typed = _retype(strip_sort_constraints(f), table, frozenset())
    sorts = {v.with_sort(Sort.X): Sort.X for v in collector.bound_seen.values()}
    sorts.update({collector.first_seen[k].with_sort(s): s for k, s in table.items()})
    return typed, sorts


def _retype(t, table, bound):
    if isinstance(t, Var):
        return t.with_sort(Sort.X if _key(t) in bound else table[_key(t)])
    if isinstance(t, (Const, Empty, Truth)):
        return t
    if isinstance(t, Pair):
        return Pair(_retype(t.left, table, bound), _retype(t.right, table, bound))
    if isinstance(t, App):
        return App(t.fn, tuple(_retype(a, table, bound) for a in t.args))
    if isinstance(t, Ext):
        return Ext(_retype(t.elem, table, bound), _retype(t.rest, table, bound))
    if isinstance(t, (Ris, Foreach, Exists)):
        inner = bound | _binder_keys(t)
        return type(t)(_retype(t.ctrl, table, inner), _retype(t.dom, table, bound),
                       _retype(t.filter, table, inner),
                       tuple(_retype(v, table, inner) for v in t.locals),
                       _retype(t.fpreds, table, inner))
    if isinstance(t, And):
        return And(tuple(_retype(i, table, bound) for i in t.items))
    if isinstance(t, Or):
        return Or(tuple(_retype(i, table, bound) for i in t.items))
    if isinstance(t, SetEq):
        left, right = _retype(t.left, table, bound), _retype(t.right, table, bound)
        if isinstance(left, Var) and left.sort is Sort.X:
            return TheoryLit('=', (left, right))
        return SetEq(left, right)
    if isinstance(t, In):
        return In(_retype(t.elem, table, bound), _retype(t.set, table, bound))
    if isinstance(t, NotIn):
        return NotIn(_retype(t.elem, table, bound), _retype(t.set, table, bound))
    if isinstance(t, Subset):
        return Subset(_retype(t.dom, table, bound), _retype(t.ris, table, bound))
    if isinstance(t, IsSet):
        return IsSet(_retype(t.term, table, bound))
    if isinstance(t, IsX):
        return IsX(_retype(t.term, table, bound))
    if isinstance(t, TheoryLit):
        return TheoryLit(t.pred, tuple(_retype(a, table, bound) for a in t.args))
    if isinstance(t, Call):
        return Call(t.name, tuple(_retype(a, table, bound) for a in t.args))
    if isinstance(t, Neg):
        return Neg(_retype(t.body, table, bound))
    if isinstance(t, Implies):
        return Implies(_retype(t.lhs, table, bound), _retype(t.rhs, table, bound))
    raise TypeError(f"cannot retype {t!r}")
