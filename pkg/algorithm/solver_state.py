"""Solver state for one branch of the SAT_RQ search"""

import threading
from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, List, Optional

from models.substitution import free_vars, resolve
from models.terms import Var, TheoryLit, Pair, conj


@dataclass
class SolverState:
    """Constraints in focus plus the substitution built up by variable elimination"""

    # Conjunction in focus; the leftmost rewritable constraint is rewritten first
    constraints: List[object]

    # Triangular: a value may mention variables bound after it, never before
    bindings: Dict[Var, object] = field(default_factory=dict)
    binding_vars: FrozenSet[Var] = field(default=frozenset(), repr=False)

    # Rule applications along this branch
    steps: int = 0

    # Rule-application log; None when tracing is off
    trace: Optional[List[str]] = None

    _occurrences: Optional[Counter] = field(default=None, init=False, repr=False, compare=False)

    def occurrences(self):
        """Number of constraints each variable occurs free in"""
        if self._occurrences is None:
            counts = Counter()
            for c in self.constraints:
                counts.update(free_vars(c))
            self._occurrences = counts
        return self._occurrences

    def resolved_bindings(self, variables=None, supply=None):
        """Idempotent form of the bindings, restricted to `variables` when given"""
        keys = self.bindings if variables is None else [v for v in variables if v in self.bindings]
        return {v: resolve(self.bindings[v], self.bindings, supply) for v in keys}

    @property
    def formula(self):
        return conj(*self.constraints)

    @property
    def pending_x(self):
        """Theory literals handed to sat_x at the fixpoint.

        `x neq [a,b]` with x still unbound is left out: the theory gives x
        a non-pair value, which satisfies it.
        """
        return [c for c in self.constraints
                if isinstance(c, TheoryLit) and not _pair_disequality(c)]

    def copy(self):
        """Branch copy; terms are immutable so only the containers are copied"""
        return SolverState(
            constraints=list(self.constraints),
            bindings=dict(self.bindings),
            binding_vars=self.binding_vars,
            steps=self.steps,
            trace=None if self.trace is None else list(self.trace),
        )

    def log(self, line):
        if self.trace is not None:
            self.trace.append(line)


def _pair_disequality(lit):
    if lit.pred != 'neq':
        return False
    return any(isinstance(a, Pair) for a in lit.args)


class StepMeter:
    """Rule applications across all branches of one search"""

    def __init__(self):
        self.count = 0
        self._lock = threading.Lock()

    def tick(self):
        with self._lock:
            self.count += 1
