"""SAT_RQ: rewrite to a fixpoint, explore choice points, hand element literals to the theory

A query goes through prepare() (definition expansion, optional negation,
sort resolution, classification, desugaring) and then sat_rq(), which
runs a depth-first search over the choice points produced by step().
Every fixpoint whose theory literals are satisfiable yields an Answer.
"""

import logging
import queue
import threading
from dataclasses import dataclass, field
from typing import Dict, Iterator, List, Optional, Tuple

from algorithm.rules import step, ChoicePoint, BudgetExhausted, is_irreducible
from algorithm.solver_state import SolverState, StepMeter
from algorithm.sorts import resolve_sorts
from analysis.definitions import expand_definitions
from analysis.desugar import desugar, normalize
from analysis.fragments import classify, FragmentVerdict
from config.constants import (
    DEFAULT_THEORY, OUTSIDE_FRAGMENT_STEP_BUDGET, OUTSIDE_FRAGMENT_TOTAL_STEPS,
    TOTAL_STEP_FACTOR, PARALLEL_WORKERS, QUEUE_POLL_SECONDS,
)
from config.theories import load_theory
from models.errors import TheoryError
from models.substitution import FreshSupply, ordered_free_vars, subterms
from models.terms import (
    Sort, Var, Const, Pair, App, Empty, Ext, SetEq, TheoryLit, Neg, Program,
    conj, conjuncts, var_key,
)
from models.values import value_key

logger = logging.getLogger(__name__)

# end-of-subtree marker on the parallel answer queue
_DONE = object()


# ------------------------------------------------------------------- verdicts

@dataclass
class Answer:
    """One solution: the irreducible constraints left, the theory model, concrete values"""
    constraints: Tuple = ()
    theory_model: Dict[Var, object] = field(default_factory=dict)
    valuation: Dict[Var, object] = field(default_factory=dict)
    bindings: Dict[Var, object] = field(default_factory=dict)
    trace: Optional[List[str]] = None

    @property
    def irreducible(self):
        return conj(*self.constraints)

    def key(self):
        return tuple((var_key(v), value_key(value)) for v, value in self.valuation.items())


@dataclass
class Sat:
    first: Answer
    rest: Iterator[Answer] = field(default_factory=lambda: iter(()), repr=False)
    status = 'sat'

    def answers(self):
        """The first answer, then the remaining ones as the search finds them"""
        yield self.first
        yield from self.rest


@dataclass
class Unsat:
    status = 'unsat'


@dataclass
class Unknown:
    reason: str
    live_branches: int = 0
    status = 'unknown'


@dataclass
class Proved:
    status = 'proved'


@dataclass
class Counterexample:
    answer: Answer
    status = 'counterexample'


# ---------------------------------------------------------------- preparation

@dataclass
class PreparedQuery:
    formula: object                 # core formula handed to sat_rq
    surface: object                 # sorted, negation-free surface formula
    variables: List[Var]            # free variables of the query, first occurrence first
    fragment: FragmentVerdict
    budget: Optional[int]
    theory: object
    supply: FreshSupply
    cap: Optional[int] = None       # rule applications across all branches


def check_theory_symbols(f, theory):
    """Every element predicate and function symbol of f must belong to the theory.

    Raises:
        TheoryError: naming the unknown symbol
    """
    for node in subterms(f):
        if isinstance(node, TheoryLit):
            theory.check_literal(node)
        elif isinstance(node, App) and node.fn not in theory.functions:
            raise TheoryError(f"theory '{theory.name}' has no function symbol '{node.fn}'")


def prepare(query, theory=None, negate_query=False, supply=None, max_steps=None):
    """Turn a parsed query or program into a core formula plus what solving it needs.

    Raises:
        SortError, NegationError, DesugarError, TheoryError
    """
    theory = theory or load_theory(DEFAULT_THEORY)
    supply = supply or FreshSupply()
    f = expand_definitions(query, supply) if isinstance(query, Program) else query
    if negate_query and not isinstance(f, Neg):
        f = Neg(f)
    typed, _ = resolve_sorts(f)
    check_theory_symbols(typed, theory)
    variables = ordered_free_vars(typed)
    surface = normalize(typed, theory)
    verdict = classify(surface)
    if max_steps is not None:
        budget, cap = max_steps, max_steps * TOTAL_STEP_FACTOR
    elif not verdict.fragment.terminates:
        budget, cap = OUTSIDE_FRAGMENT_STEP_BUDGET, OUTSIDE_FRAGMENT_TOTAL_STEPS
    else:
        budget, cap = None, None
    logger.debug("fragment %s, step budget %s, global cap %s", verdict.name, budget, cap)
    formula = desugar(surface, theory, supply)
    return PreparedQuery(formula, surface, variables, verdict, budget, theory, supply, cap)


# ------------------------------------------------------------------ valuation

class _Valuation:
    """Concrete values read off a solved branch"""

    def __init__(self, st, model, theory):
        self.bindings = st.bindings
        self.solved = {c.left: c.right for c in st.constraints
                       if isinstance(c, SetEq) and isinstance(c.left, Var)}
        self.model = model
        self.theory = theory
        self.cache = {}

    def var(self, v):
        if v not in self.cache:
            if v in self.bindings:
                value = self.term(self.bindings[v])
            elif v in self.solved:
                value = self.term(self.solved[v])
            elif v.sort is Sort.SET:
                value = frozenset()
            elif v in self.model:
                value = self.model[v]
            else:
                value = self.theory.default_value(self.model.values())
            self.cache[v] = value
        return self.cache[v]

    def term(self, t):
        if isinstance(t, Var):
            return self.var(t)
        if isinstance(t, Const):
            return t.value
        if isinstance(t, Pair):
            return (self.term(t.left), self.term(t.right))
        if isinstance(t, App):
            return self.theory.apply_function(t.fn, [self.term(a) for a in t.args])
        if isinstance(t, Empty):
            return frozenset()
        if isinstance(t, Ext):
            return self.term(t.rest) | {self.term(t.elem)}
        raise TypeError(f"no value for term {t!r}")


# --------------------------------------------------------------------- search

class _MemoTheory:
    """A theory whose sat_x verdicts are remembered for one search"""

    def __init__(self, theory):
        self._theory = theory
        self._verdicts = {}

    def sat_x(self, lits):
        key = frozenset(lits)
        verdict = self._verdicts.get(key)
        if verdict is None:
            verdict = self._verdicts[key] = self._theory.sat_x(lits)
        return verdict

    def __getattr__(self, name):
        return getattr(self._theory, name)


class Search:
    """Depth-first exploration of the choice points of one query"""

    def __init__(self, theory, budget=None, supply=None, cap=None):
        self.theory = _MemoTheory(theory)
        self.budget = budget
        self.supply = supply
        self.meter = StepMeter()
        if cap is None and budget is not None:
            cap = budget * TOTAL_STEP_FACTOR
        self.cap = cap
        self.exhausted = 0
        self.capped = False
        self.cancelled = threading.Event()
        self._lock = threading.Lock()

    def _exhaust(self, n):
        with self._lock:
            self.exhausted += n

    def _over_cap(self):
        return self.cap is not None and self.meter.count >= self.cap

    def _step(self, st):
        """step() with the branch budget cut down to what is left of the global cap"""
        budget = self.budget
        if self.cap is not None:
            room = st.steps + max(self.cap - self.meter.count, 0)
            budget = room if budget is None else min(budget, room)
        return step(st, self.theory, budget, self.supply, self.meter)

    def _handle(self, result, stack, variables):
        """Push the alternatives of a choice point, or turn a fixpoint into an Answer"""
        if result is False:
            return None
        if isinstance(result, BudgetExhausted):
            logger.debug("branch exhausted its budget after %d steps", result.state.steps)
            if self._over_cap():
                self.capped = True
            self._exhaust(1)
            return None
        if isinstance(result, ChoicePoint):
            stack.extend(reversed(result.alternatives))
            return None
        return self.finish(result, variables)

    def explore(self, stack, variables):
        while stack:
            if self.cancelled.is_set():
                return
            if self._over_cap():
                logger.debug("global step cap %d reached with %d open branches", self.cap, len(stack))
                self.capped = True
                self._exhaust(len(stack))
                return
            answer = self._handle(self._step(stack.pop()), stack, variables)
            if answer is not None:
                yield answer

    def explore_parallel(self, root, variables, workers=PARALLEL_WORKERS):
        """Subtrees of the first choice point explored concurrently; answer order varies.

        Workers hand answers over a bounded queue as they find them. Closing
        the stream cancels the subtrees still being explored.
        """
        stack = []
        answer = self._handle(self._step(root), stack, variables)
        if answer is not None:
            yield answer
        if not stack:
            return
        answers = queue.Queue(maxsize=workers)

        def put(item):
            while not self.cancelled.is_set():
                try:
                    answers.put(item, timeout=QUEUE_POLL_SECONDS)
                    return
                except queue.Full:
                    continue

        def work():
            while not self.cancelled.is_set():
                try:
                    st = todo.get_nowait()
                except queue.Empty:
                    break
                try:
                    for found in self.explore([st], variables):
                        put(found)
                except Exception as e:
                    put(e)
            put(_DONE)

        todo = queue.Queue()
        for st in stack:
            todo.put(st)
        threads = [threading.Thread(target=work, name=f"rq-search-{i}", daemon=True)
                   for i in range(min(workers, len(stack)))]
        for thread in threads:
            thread.start()
        try:
            remaining = len(threads)
            while remaining:
                item = answers.get()
                if item is _DONE:
                    remaining -= 1
                elif isinstance(item, Exception):
                    raise item
                else:
                    yield item
        finally:
            self.cancelled.set()

    def finish(self, st, variables):
        """Answer of a fixpoint state, or None when its theory literals are unsat"""
        lits = st.pending_x
        verdict = self.theory.sat_x(lits)
        logger.debug("sat_x on %d literals: %s", len(lits), "sat" if verdict else "unsat")
        if not verdict:
            return None
        if not is_irreducible(st):
            logger.warning("fixpoint is not in solved form: %s", st.formula)
        values = _Valuation(st, verdict.model, self.theory)
        valuation = {v: values.var(v) for v in variables}
        bindings = {}
        resolved = st.resolved_bindings(variables, self.supply)
        for v in variables:
            if v in resolved:
                bindings[v] = resolved[v]
            elif v in values.solved:
                bindings[v] = values.solved[v]
        return Answer(
            constraints=tuple(st.constraints),
            theory_model=dict(verdict.model),
            valuation=valuation,
            bindings=bindings,
            trace=st.trace,
        )


def sat_rq(f, theory=None, budget=None, supply=None, variables=None, trace=False,
           parallel=False, cap=None):
    """Decide a core formula.

    Returns Sat with a lazy stream of answers, Unsat when every branch
    reached false, or Unknown when no answer was found and some branch ran
    out of budget or the search reached its global cap of `cap` rule
    applications (budget times TOTAL_STEP_FACTOR when not given).
    """
    theory = theory or load_theory(DEFAULT_THEORY)
    variables = ordered_free_vars(f) if variables is None else list(variables)
    supply = supply or FreshSupply.above(f)
    search = Search(theory, budget, supply, cap)
    root = SolverState(constraints=conjuncts(f), trace=[] if trace else None)
    if parallel:
        stream = search.explore_parallel(root, variables)
    else:
        stream = search.explore([root], variables)
    first = next(stream, None)
    if first is not None:
        return Sat(first, stream)
    if search.capped:
        reason = f"global cap of {search.cap} steps reached (branch budget {budget})"
        return Unknown(reason, search.exhausted)
    if search.exhausted:
        return Unknown(f"step budget of {budget} exhausted", search.exhausted)
    return Unsat()


def solve(prepared, trace=False, parallel=False):
    """sat_rq on a prepared query"""
    return sat_rq(prepared.formula, prepared.theory, prepared.budget, prepared.supply,
                  prepared.variables, trace, parallel, prepared.cap)


def enumerate_answers(prepared, max_answers=None, trace=False, parallel=False):
    """(distinct answers in choice-point order, verdict) of a prepared query"""
    verdict = solve(prepared, trace, parallel)
    if not isinstance(verdict, Sat):
        return [], verdict
    answers, seen = [], set()
    for answer in verdict.answers():
        key = answer.key()
        if key in seen:
            continue
        seen.add(key)
        answers.append(answer)
        if max_answers is not None and len(answers) >= max_answers:
            break
    return answers, verdict


def prove(query, theory=None, max_steps=None, supply=None, trace=False, parallel=False):
    """Solve the negation of a lemma: Proved when it is unsat, else a counterexample.

    A query already written as neg(...) is taken as the negated lemma.
    """
    prepared = prepare(query, theory, negate_query=True, supply=supply, max_steps=max_steps)
    verdict = solve(prepared, trace, parallel)
    if isinstance(verdict, Unsat):
        return Proved(), prepared
    if isinstance(verdict, Sat):
        return Counterexample(verdict.first), prepared
    return verdict, prepared
