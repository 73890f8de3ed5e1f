"""Equality theory over uninterpreted atoms (and integer literals as atoms)"""

import logging

from config.constants import FRESH_ATOM_PREFIX
from models.errors import TheoryError
from models.terms import Var, Const
from models.theory import Theory, TheoryVerdict, UNSAT, fresh_atom, constant_values

logger = logging.getLogger(__name__)


class UnionFind:
    """Union-find with path compression and union by rank over 0..n-1"""

    def __init__(self, n):
        self.parent = list(range(n))
        self.rank = [0] * n

    def find(self, x):
        i = x
        while i != self.parent[i]:
            self.parent[i] = self.parent[self.parent[i]]
            i = self.parent[i]
        return i

    def linked(self, x, y):
        return self.find(x) == self.find(y)

    def union(self, x, y):
        i = self.find(x)
        j = self.find(y)
        if i == j:
            return
        if self.rank[i] < self.rank[j]:
            self.parent[i] = j
        elif self.rank[i] > self.rank[j]:
            self.parent[j] = i
        else:
            self.parent[j] = i
            self.rank[i] += 1


class EqualityTheory(Theory):
    """Conjunctions of = and neq between variables and constants.

    Equalities are merged with union-find, then every class may hold at
    most one constant and no disequality may sit inside a class. Models
    give each constant-free class its own fresh atom.
    """

    name = 'eq'
    predicates = frozenset({'=', 'neq'})
    complements = {'=': 'neq', 'neq': '='}

    def sat_x(self, lits):
        lits = self.expand_functional(lits)
        index = {}

        def slot(t):
            if not isinstance(t, (Var, Const)):
                raise TheoryError(f"theory 'eq' cannot interpret term {t!r}")
            if t not in index:
                index[t] = len(index)
            return index[t]

        pairs = [(lit.pred, slot(lit.args[0]), slot(lit.args[1])) for lit in lits]
        uf = UnionFind(len(index))
        for pred, i, j in pairs:
            if pred == '=':
                uf.union(i, j)

        # at most one constant per class
        class_const = {}
        for t, i in index.items():
            if isinstance(t, Const):
                root = uf.find(i)
                if root in class_const and class_const[root] != t.value:
                    logger.debug("eq: constants %r and %r merged", class_const[root], t.value)
                    return UNSAT
                class_const[root] = t.value

        for pred, i, j in pairs:
            if pred == 'neq' and uf.linked(i, j):
                return UNSAT

        taken = {str(v) for v in constant_values(lits)}
        next_k = 0
        class_value = dict(class_const)
        model = {}
        for t, i in sorted(index.items(), key=lambda item: item[1]):
            if not isinstance(t, Var):
                continue
            root = uf.find(i)
            if root not in class_value:
                atom, next_k = fresh_atom(taken, FRESH_ATOM_PREFIX, next_k)
                class_value[root] = atom
            model[t] = class_value[root]
        return TheoryVerdict(True, model)

    def element_values(self, universe):
        return tuple(universe.ints) + tuple(universe.atoms)

    def default_value(self, avoid=()):
        return fresh_atom({str(v) for v in avoid}, FRESH_ATOM_PREFIX)[0]
