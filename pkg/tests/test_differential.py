"""Solver verdicts checked against the brute-force evaluator on random queries"""

import numpy as np
import pytest

from algorithm.solver import prepare, enumerate_answers, Sat, Unsat, Unknown
from analysis.oracle import eval_formula, has_model
from config.theories import load_theory
from models.values import Universe
from ui.parser import parse_formula

from tests.generators import fragment_formula

LIA = load_theory('lia')
UNIVERSE = Universe(atoms=('a',), int_lo=0, int_hi=2, max_set_card=2)
QUERIES_PER_FRAGMENT = 1000
# Far above what any in-fragment query here needs; reaching it is a failure
MAX_STEPS = 20_000


@pytest.mark.parametrize('fragment', [
    'PhiForall', 'PhiExists', 'PhiExistsForall', 'PhiForallExists',
])
def test_verdict_agrees_with_evaluator(fragment):
    """Every answer is a model, every Unsat has no small model, and nothing is Unknown"""
    rng = np.random.default_rng(sum(map(ord, fragment)))
    for _ in range(QUERIES_PER_FRAGMENT):
        text = fragment_formula(rng, fragment)
        prepared = prepare(parse_formula(text), LIA, max_steps=MAX_STEPS)
        assert prepared.fragment.fragment.terminates, f"{text} classified {prepared.fragment.name}"

        answers, verdict = enumerate_answers(prepared, max_answers=3)
        assert not isinstance(verdict, Unknown), f"{text} did not terminate: {verdict.reason}"
        if isinstance(verdict, Sat):
            assert answers, f"{text}: Sat without an answer"
            for answer in answers:
                assert eval_formula(prepared.surface, answer.valuation, LIA), (
                    f"{text}: answer {answer.valuation} is not a model"
                )
        else:
            assert isinstance(verdict, Unsat)
            assert not has_model(prepared.surface, LIA, UNIVERSE), f"{text} has a small model"
