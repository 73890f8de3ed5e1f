"""Two-sorted terms, constraints and formulas

Element terms (sort X) are variables, constants, pairs and theory
applications. Set terms are the empty set, set variables, extensional
cons cells {elem / rest} and restricted intensional sets (RIS). All nodes
are frozen dataclasses so they can be hashed, compared structurally and
shared between solver branches.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Tuple, Union

from config.constants import FRESH_PREFIX


class Sort(Enum):
    SET = 'Set'
    X = 'X'


@dataclass(frozen=True)
class Var:
    """Variable; sort is None only in freshly parsed, not yet sorted input"""
    name: str
    sort: Optional[Sort] = None
    fresh_id: Optional[int] = None

    @property
    def is_fresh(self):
        return self.fresh_id is not None

    def with_sort(self, sort):
        return Var(self.name, sort, self.fresh_id)

    def __str__(self):
        if self.fresh_id is not None:
            return f"{FRESH_PREFIX}{self.fresh_id}"
        return self.name


# ---------------------------------------------------------------- X terms

@dataclass(frozen=True)
class Const:
    """Atom (str) or integer literal"""
    value: Union[str, int]


@dataclass(frozen=True)
class Pair:
    left: 'Term'
    right: 'Term'


@dataclass(frozen=True)
class App:
    """Theory function application, e.g. App('+', (x, y))"""
    fn: str
    args: Tuple['Term', ...]


# -------------------------------------------------------------- set terms

@dataclass(frozen=True)
class Empty:
    pass


EMPTY = Empty()


@dataclass(frozen=True)
class Ext:
    """{elem / rest}, i.e. {elem} union rest"""
    elem: 'Term'
    rest: 'Term'


# --------------------------------------------------------------- formulas

@dataclass(frozen=True)
class Truth:
    value: bool


TRUE = Truth(True)
FALSE = Truth(False)


@dataclass(frozen=True)
class Ris:
    """{ctrl : dom | filter}; locals and fpreds carry the arity-4 form"""
    ctrl: 'Term'
    dom: 'Term'
    filter: 'Formula'
    locals: Tuple[Var, ...] = ()
    fpreds: 'Formula' = TRUE

    @property
    def is_extended(self):
        return bool(self.locals) or self.fpreds != TRUE


@dataclass(frozen=True)
class And:
    items: Tuple['Formula', ...]


@dataclass(frozen=True)
class Or:
    items: Tuple['Formula', ...]


@dataclass(frozen=True)
class SetEq:
    left: 'Term'
    right: 'Term'


@dataclass(frozen=True)
class In:
    elem: 'Term'
    set: 'Term'


@dataclass(frozen=True)
class NotIn:
    elem: 'Term'
    set: 'Term'


@dataclass(frozen=True)
class Subset:
    """RUQ constraint dom <= ris with ris.dom identical to dom"""
    dom: 'Term'
    ris: Ris


@dataclass(frozen=True)
class IsSet:
    term: 'Term'


@dataclass(frozen=True)
class IsX:
    term: 'Term'


@dataclass(frozen=True)
class TheoryLit:
    pred: str
    args: Tuple['Term', ...]


@dataclass(frozen=True)
class Call:
    """Call to a user-defined predicate (expanded before solving)"""
    name: str
    args: Tuple['Term', ...]


# ------------------------------------------------------ surface-only nodes

@dataclass(frozen=True)
class Neg:
    body: 'Formula'


@dataclass(frozen=True)
class Implies:
    lhs: 'Formula'
    rhs: 'Formula'


@dataclass(frozen=True)
class Foreach:
    ctrl: 'Term'
    dom: 'Term'
    filter: 'Formula'
    locals: Tuple[Var, ...] = ()
    fpreds: 'Formula' = TRUE

    @property
    def is_extended(self):
        return bool(self.locals) or self.fpreds != TRUE


@dataclass(frozen=True)
class Exists:
    ctrl: 'Term'
    dom: 'Term'
    filter: 'Formula'
    locals: Tuple[Var, ...] = ()
    fpreds: 'Formula' = TRUE

    @property
    def is_extended(self):
        return bool(self.locals) or self.fpreds != TRUE


@dataclass(frozen=True)
class Definition:
    name: str
    params: Tuple[Var, ...]
    body: 'Formula'


@dataclass(frozen=True)
class Program:
    definitions: Tuple[Definition, ...]
    query: 'Formula'


Term = Union[Var, Const, Pair, App, Empty, Ext, Ris]
Formula = Union[Truth, And, Or, SetEq, In, NotIn, Subset, IsSet, IsX,
                TheoryLit, Call, Neg, Implies, Foreach, Exists]


# ----------------------------------------------------------- constructors

def conj(*formulas):
    """Flattening conjunction: drops true, collapses on false"""
    items = []
    for f in formulas:
        if isinstance(f, And):
            items.extend(f.items)
        elif f == TRUE:
            continue
        elif f == FALSE:
            return FALSE
        else:
            items.append(f)
    if not items:
        return TRUE
    if len(items) == 1:
        return items[0]
    return And(tuple(items))


def disj(*formulas):
    """Flattening disjunction: drops false, collapses on true"""
    items = []
    for f in formulas:
        if isinstance(f, Or):
            items.extend(f.items)
        elif f == FALSE:
            continue
        elif f == TRUE:
            return TRUE
        else:
            items.append(f)
    if not items:
        return FALSE
    if len(items) == 1:
        return items[0]
    return Or(tuple(items))


def conjuncts(f):
    """Top-level conjuncts of f as a list"""
    if isinstance(f, And):
        return list(f.items)
    if f == TRUE:
        return []
    return [f]


def ext(elems, tail=EMPTY):
    """Build {e1, ..., en / tail}"""
    result = tail
    for elem in reversed(list(elems)):
        result = Ext(elem, result)
    return result


def split_ext(t):
    """Return (elements, tail) of an extensional chain"""
    elems = []
    while isinstance(t, Ext):
        elems.append(t.elem)
        t = t.rest
    return elems, t


def tail_of(t):
    return split_ext(t)[1]


def occurs_in_tail(v, t):
    """True iff t is an extensional chain whose terminal variable is v"""
    return isinstance(t, Ext) and tail_of(t) == v


def domain_variable(t):
    """The variable of a variable domain, or None for ground domains"""
    tail = tail_of(t)
    return tail if isinstance(tail, Var) else None


def ctrl_vars(ctrl):
    """Variables of a control term, left to right"""
    if isinstance(ctrl, Var):
        return [ctrl]
    if isinstance(ctrl, Pair):
        return ctrl_vars(ctrl.left) + ctrl_vars(ctrl.right)
    return []


def is_ctrl_term(t):
    if isinstance(t, Var):
        return True
    if isinstance(t, Pair):
        return is_ctrl_term(t.left) and is_ctrl_term(t.right)
    return False


def contains_pair(t):
    if isinstance(t, Pair):
        return True
    if isinstance(t, App):
        return any(contains_pair(a) for a in t.args)
    return False


def var_key(v):
    """Deterministic ordering key for variables"""
    return (v.fresh_id is not None, v.fresh_id or 0, v.name)
