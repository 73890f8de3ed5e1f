"""Expansion of user predicate definitions"""

from models.substitution import apply_subst, free_vars, fresh_var
from models.terms import (
    And, Or, Neg, Implies, Foreach, Exists, Subset, Ris, Call, TheoryLit, var_key,
)


def expand_definitions(program, supply=None):
    """Query of a program with every call to a defined predicate inlined.

    Parameters are replaced by the call's arguments and the remaining free
    variables of a body are renamed fresh at each call. Calls to names
    with no definition become theory literals, which the theory validates.
    """
    definitions = {d.name: d for d in program.definitions}

    def expand(f):
        if isinstance(f, Call):
            d = definitions.get(f.name)
            if d is None:
                return TheoryLit(f.name, f.args)
            s = dict(zip(d.params, f.args))
            for v in sorted(free_vars(d.body) - set(d.params), key=var_key):
                s[v] = fresh_var(v.sort, supply)
            return expand(apply_subst(s, d.body, supply))
        if isinstance(f, And):
            return And(tuple(expand(item) for item in f.items))
        if isinstance(f, Or):
            return Or(tuple(expand(item) for item in f.items))
        if isinstance(f, Neg):
            return Neg(expand(f.body))
        if isinstance(f, Implies):
            return Implies(expand(f.lhs), expand(f.rhs))
        if isinstance(f, (Foreach, Exists)):
            return type(f)(f.ctrl, f.dom, expand(f.filter), f.locals, expand(f.fpreds))
        if isinstance(f, Subset):
            r = f.ris
            return Subset(f.dom, Ris(r.ctrl, r.dom, expand(r.filter), r.locals, expand(r.fpreds)))
        return f

    return expand(program.query)
