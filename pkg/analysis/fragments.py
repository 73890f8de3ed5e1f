"""Classification of formulas into the fragments where solving terminates

Each conjunct of a formula is a chain of nested quantifiers. A quantifier
whose domain is a variable, or an extensional set ending in one, becomes a
node ((i, j), (Q, D)) of the domain graph: i numbers the conjunct, j the
quantifier's position in it, D is the domain variable. Edges go

    forall -> exists   within one conjunct, exists nested below the forall
    exists -> forall   across different conjuncts with the same variable

A forall/exists loop is an alternating path through distinct conjuncts
that starts at a forall over D and ends at an exists over D. Without such
a loop the solver terminates; with one it may not, and the verdict is
Outside.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Tuple

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from models.terms import (
    Var, And, Or, In, SetEq, Subset, Foreach, Exists, Neg, Implies,
    domain_variable, ctrl_vars,
)

logger = logging.getLogger(__name__)

# DNF branches examined one by one; beyond this the whole formula is one branch
MAX_BRANCHES = 256


class Fragment(Enum):
    FORALL = 'PhiForall'
    EXISTS = 'PhiExists'
    EXISTS_FORALL = 'PhiExistsForall'
    FORALL_EXISTS = 'PhiForallExists'
    OUTSIDE = 'Outside'

    @property
    def terminates(self):
        return self is not Fragment.OUTSIDE


_RANK = {
    Fragment.FORALL: 0,
    Fragment.EXISTS: 0,
    Fragment.EXISTS_FORALL: 1,
    Fragment.FORALL_EXISTS: 2,
    Fragment.OUTSIDE: 3,
}


def join(a, b):
    """Least fragment containing both"""
    if a is None or a == b:
        return b
    if b is None:
        return a
    rank = max(_RANK[a], _RANK[b])
    if rank == 0:
        return Fragment.EXISTS_FORALL
    return a if _RANK[a] >= _RANK[b] else b


FORALL, EXISTS = 'forall', 'exists'


@dataclass(frozen=True)
class DomainNode:
    conjunct: int
    position: int
    quantifier: str
    domain: Var

    def __str__(self):
        symbol = '∀' if self.quantifier == FORALL else '∃'
        return f"(({self.conjunct},{self.position}),({symbol},{self.domain}))"


@dataclass
class DomainGraph:
    nodes: List[DomainNode] = field(default_factory=list)
    edges: List[Tuple[DomainNode, DomainNode]] = field(default_factory=list)

    def successors(self, node):
        return [b for a, b in self.edges if a == node]


@dataclass
class FragmentVerdict:
    fragment: Fragment
    graph: DomainGraph = field(default_factory=DomainGraph)
    loop: Tuple[DomainNode, ...] = ()
    warnings: List[str] = field(default_factory=list)
    branches: int = 1

    @property
    def name(self):
        return self.fragment.value


# ------------------------------------------------------------- domain graph

@dataclass
class _Quantifier:
    kind: str
    position: int
    domain: object
    ancestors: Tuple[int, ...]
    ancestor_kinds: Tuple[str, ...]
    bound_domain: bool

    @property
    def below_forall(self):
        return FORALL in self.ancestor_kinds


def _chain(q, ancestors=(), kinds=(), bound=frozenset(), out=None):
    """Quantifiers of a conjunct in pre-order, each with its enclosing positions"""
    if out is None:
        out = []
    if isinstance(q, Subset):
        q = Foreach(q.ris.ctrl, q.dom, q.ris.filter, q.ris.locals, q.ris.fpreds)
    if isinstance(q, (Foreach, Exists)):
        kind = FORALL if isinstance(q, Foreach) else EXISTS
        var = domain_variable(q.dom)
        position = len(out) + 1
        out.append(_Quantifier(kind, position, var, ancestors, kinds,
                               var is not None and var in bound))
        _chain(q.filter, ancestors + (position,), kinds + (kind,),
               bound | frozenset(ctrl_vars(q.ctrl)), out)
    elif isinstance(q, In) and ancestors:
        # a membership under a quantifier hypothesizes elements of its set
        _hypothesis(domain_variable(q.set), ancestors, kinds, bound, out)
    elif isinstance(q, SetEq) and ancestors:
        for side in (q.left, q.right):
            _hypothesis(domain_variable(side), ancestors, kinds, bound, out)
    elif isinstance(q, (And, Or)):
        for item in q.items:
            _chain(item, ancestors, kinds, bound, out)
    elif isinstance(q, Neg):
        _chain(q.body, ancestors, kinds, bound, out)
    elif isinstance(q, Implies):
        _chain(q.lhs, ancestors, kinds, bound, out)
        _chain(q.rhs, ancestors, kinds, bound, out)
    return out


def _hypothesis(var, ancestors, kinds, bound, out):
    if var is not None:
        out.append(_Quantifier(EXISTS, len(out) + 1, var, ancestors, kinds, var in bound))


def _is_rq(f):
    return isinstance(f, (Foreach, Exists, Subset))


class _DomainMerge:
    """Union-find over set variables equated at the top level of a branch"""

    def __init__(self, conjuncts):
        self.parent = {}
        for c in conjuncts:
            if isinstance(c, SetEq) and isinstance(c.left, Var):
                other = c.right if isinstance(c.right, Var) else domain_variable(c.right)
                if other is not None:
                    self.union(c.left, other)

    def find(self, v):
        self.parent.setdefault(v, v)
        while self.parent[v] != v:
            self.parent[v] = self.parent[self.parent[v]]
            v = self.parent[v]
        return v

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[ra] = rb


def _analyse(conjuncts):
    """(domain graph, per-conjunct quantifier lists, warnings) of one branch"""
    merge = _DomainMerge(conjuncts)
    graph = DomainGraph()
    chains, warnings = [], []
    index = 0
    for c in conjuncts:
        if _is_rq(c):
            chain = _chain(c)
        elif isinstance(c, In) and domain_variable(c.set) is not None:
            # a membership hypothesizes an element like an exists without filter
            chain = [_Quantifier(EXISTS, 1, domain_variable(c.set), (), (), False)]
        else:
            continue
        index += 1
        chains.append(chain)
        for q in chain:
            if q.domain is None:
                continue
            if q.bound_domain:
                warnings.append(
                    f"quantified variable {q.domain} is used as a domain "
                    f"(conjunct {index}, position {q.position}); termination is not guaranteed"
                )
            graph.nodes.append(DomainNode(index, q.position, q.kind, merge.find(q.domain)))

    by_conjunct = {}
    for n in graph.nodes:
        by_conjunct.setdefault(n.conjunct, []).append(n)
    for i, chain in enumerate(chains, start=1):
        for a in by_conjunct.get(i, []):
            if a.quantifier != FORALL:
                continue
            for b in by_conjunct.get(i, []):
                if b.quantifier == EXISTS and a.position in chain[b.position - 1].ancestors:
                    graph.edges.append((a, b))
    for a in graph.nodes:
        if a.quantifier != EXISTS:
            continue
        for b in graph.nodes:
            if b.quantifier == FORALL and b.conjunct != a.conjunct and b.domain == a.domain:
                graph.edges.append((a, b))
    return graph, chains, warnings


def build_domain_graph(f):
    """Domain graph of a conjunction of nested quantifiers"""
    graph, _, _ = _analyse(_top_conjuncts(f))
    return graph


def _top_conjuncts(f):
    if isinstance(f, And):
        out = []
        for item in f.items:
            out.extend(_top_conjuncts(item))
        return out
    return [f]


# --------------------------------------------------------------- loop search

def find_loop(graph):
    """A forall/exists loop of the graph as a node tuple, or () when there is none"""
    if not graph.nodes:
        return ()
    index = {n: k for k, n in enumerate(graph.nodes)}
    rows, cols = [], []
    for a, b in graph.edges:
        rows.append(index[a])
        cols.append(index[b])
    # closing edges exists(D) -> forall(D) make every loop a cycle
    for a in graph.nodes:
        for b in graph.nodes:
            if a.quantifier == EXISTS and b.quantifier == FORALL and a.domain == b.domain:
                rows.append(index[a])
                cols.append(index[b])
    size = len(graph.nodes)
    adjacency = csr_matrix((np.ones(len(rows), dtype=np.int8), (rows, cols)), shape=(size, size))
    _, labels = connected_components(adjacency, directed=True, connection='strong')
    counts = np.bincount(labels, minlength=size)

    successors = {n: graph.successors(n) for n in graph.nodes}
    for start in graph.nodes:
        if start.quantifier != FORALL or counts[labels[index[start]]] < 2:
            continue
        path = _search(start, start, successors, {start.conjunct}, (start,))
        if path:
            logger.debug("forall/exists loop: %s", " -> ".join(map(str, path)))
            return path
    return ()


def _search(start, forall, successors, used, path):
    for e in successors[forall]:
        if e.quantifier != EXISTS or e.conjunct != forall.conjunct:
            continue
        if e.domain == start.domain:
            return path + (e,)
        for nxt in successors[e]:
            if nxt.quantifier == FORALL and nxt.conjunct not in used:
                found = _search(start, nxt, successors, used | {nxt.conjunct}, path + (e, nxt))
                if found:
                    return found
    return ()


# ------------------------------------------------------------ classification

def dnf_branches(f):
    """Conjunct lists of the disjunctive normal form of the top-level structure"""
    if isinstance(f, Or):
        out = []
        for item in f.items:
            out.extend(dnf_branches(item))
        return out
    if isinstance(f, And):
        branches = [[]]
        for item in f.items:
            item_branches = dnf_branches(item)
            branches = [b + ib for b in branches for ib in item_branches]
            if len(branches) > MAX_BRANCHES:
                return None
        return branches
    return [[f]]


def _conjunct_fragment(chain):
    kinds = {q.kind for q in chain}
    if kinds == {FORALL}:
        return Fragment.FORALL
    if kinds == {EXISTS}:
        return Fragment.EXISTS
    if any(q.kind == EXISTS and q.below_forall for q in chain):
        return Fragment.FORALL_EXISTS
    return Fragment.EXISTS_FORALL


def classify_branch(conjuncts):
    graph, chains, warnings = _analyse(conjuncts)
    fragment = None
    for chain in chains:
        if chain:
            fragment = join(fragment, _conjunct_fragment(chain))
    if fragment is None:
        # no quantifier at all: nothing to iterate over
        return FragmentVerdict(Fragment.FORALL, graph, (), warnings)
    loop = ()
    if fragment is Fragment.FORALL_EXISTS or warnings:
        loop = find_loop(graph)
        if loop:
            fragment = Fragment.OUTSIDE
    return FragmentVerdict(fragment, graph, loop, warnings)


def classify(f):
    """Most specific fragment holding every DNF branch of f"""
    branches = dnf_branches(f)
    if branches is None:
        branches = [_flatten_all(f)]
    verdict = None
    for conjuncts in branches:
        branch = classify_branch(conjuncts)
        if verdict is None or join(verdict.fragment, branch.fragment) != verdict.fragment:
            combined = join(None if verdict is None else verdict.fragment, branch.fragment)
            warnings = (verdict.warnings if verdict else []) + branch.warnings
            verdict = FragmentVerdict(combined, branch.graph, branch.loop, warnings)
        else:
            verdict.warnings.extend(branch.warnings)
    verdict.branches = len(branches)
    logger.debug("classified as %s over %d branch(es)", verdict.name, verdict.branches)
    return verdict


def _flatten_all(f):
    if isinstance(f, (And, Or)):
        out = []
        for item in f.items:
            out.extend(_flatten_all(item))
        return out
    return [f]
