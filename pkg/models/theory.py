"""Contract of a pluggable element theory

A theory supplies the element predicates (at least = and neq), a decision
procedure for conjunctions of its literals, literal complements used by
negation, functional predicates for the arity-4 quantifiers, and an
evaluator the oracle uses. Theories keep no state between calls.
"""

from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, Optional

from models.errors import TheoryError, OracleError
from models.terms import Var, Const, Pair, App, TheoryLit


@dataclass(frozen=True)
class FunctionalPredicate:
    """Predicate with exactly one result per input tuple (result is last arg)"""
    name: str
    arity: int
    evaluator: Callable[..., object]
    hook: Callable[[tuple], TheoryLit]

    def evaluate(self, *inputs):
        return self.evaluator(*inputs)

    def literal(self, args):
        """Plain theory literal expressing pred(args) for the decision procedure"""
        return self.hook(tuple(args))


@dataclass(frozen=True)
class TheoryVerdict:
    satisfiable: bool
    model: Dict[Var, object] = field(default_factory=dict)

    def __bool__(self):
        return self.satisfiable


UNSAT = TheoryVerdict(False)


class Theory:
    """Base class; subclasses fill the registries and implement sat_x"""

    name = ''
    predicates: FrozenSet[str] = frozenset()
    complements: Dict[str, str] = {}
    functions: FrozenSet[str] = frozenset()
    functional: Dict[str, FunctionalPredicate] = {}

    # -- decision procedure ------------------------------------------------

    def sat_x(self, lits):
        """Decide a conjunction of literals; returns a TheoryVerdict"""
        raise NotImplementedError

    def check_literal(self, lit):
        if lit.pred in self.predicates:
            return
        fp = self.functional.get(lit.pred)
        if fp is not None:
            if len(lit.args) != fp.arity:
                raise TheoryError(f"{lit.pred} expects {fp.arity} arguments, got {len(lit.args)}")
            return
        raise TheoryError(f"theory '{self.name}' has no predicate '{lit.pred}'")

    def expand_functional(self, lits):
        """Replace functional-predicate literals by their hook literals"""
        result = []
        for lit in lits:
            self.check_literal(lit)
            fp = self.functional.get(lit.pred)
            result.append(fp.literal(lit.args) if fp is not None else lit)
        return result

    # -- negation ------------------------------------------------------------

    def negate_lit(self, lit):
        complement = self.complements.get(lit.pred)
        if complement is None:
            raise TheoryError(f"no complement registered for '{lit.pred}' in theory '{self.name}'")
        return TheoryLit(complement, lit.args)

    # -- functional predicates ----------------------------------------------

    def fp_lookup(self, name):
        fp = self.functional.get(name)
        if fp is None:
            known = ", ".join(sorted(self.functional)) or "none"
            raise TheoryError(
                f"'{name}' is not a functional predicate of theory '{self.name}' "
                f"(registered: {known})"
            )
        return fp

    def is_functional(self, name):
        return name in self.functional

    # -- evaluation ------------------------------------------------------------

    def apply_function(self, fn, values):
        raise OracleError(f"theory '{self.name}' has no function symbol '{fn}'")

    def compare(self, pred, values):
        raise OracleError(f"theory '{self.name}' cannot evaluate '{pred}'")

    def eval_term(self, t, valuation):
        if isinstance(t, Var):
            if t not in valuation:
                raise OracleError(f"variable {t} has no value")
            return valuation[t]
        if isinstance(t, Const):
            return t.value
        if isinstance(t, Pair):
            return (self.eval_term(t.left, valuation), self.eval_term(t.right, valuation))
        if isinstance(t, App):
            return self.apply_function(t.fn, [self.eval_term(a, valuation) for a in t.args])
        raise OracleError(f"not an element term: {t!r}")

    def evaluate(self, lit, valuation):
        values = [self.eval_term(a, valuation) for a in lit.args]
        if lit.pred == '=':
            return values[0] == values[1]
        if lit.pred == 'neq':
            return values[0] != values[1]
        fp = self.functional.get(lit.pred)
        if fp is not None:
            return fp.evaluate(*values[:-1]) == values[-1]
        if lit.pred in self.predicates:
            return self.compare(lit.pred, values)
        raise TheoryError(f"theory '{self.name}' has no predicate '{lit.pred}'")

    # -- enumeration support -------------------------------------------------

    def element_values(self, universe):
        """Values an X variable ranges over in a brute-force enumeration"""
        raise NotImplementedError

    def default_value(self, avoid=()):
        """Value for an X variable no constraint mentions"""
        raise NotImplementedError


def fresh_atom(taken, prefix, start=0):
    """First atom prefix<k> (k >= start) not in taken"""
    k = start
    while f"{prefix}{k}" in taken:
        k += 1
    return f"{prefix}{k}", k + 1


def constant_values(lits):
    """Constants occurring in a list of literals"""
    found = set()

    def walk(t):
        if isinstance(t, Const):
            found.add(t.value)
        elif isinstance(t, Pair):
            walk(t.left)
            walk(t.right)
        elif isinstance(t, App):
            for a in t.args:
                walk(a)

    for lit in lits:
        for a in lit.args:
            walk(a)
    return found
