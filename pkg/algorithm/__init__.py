# Algorithm module exports
from .rules import step, is_irreducible
from .solver import prepare, sat_rq, solve, enumerate_answers, prove
from .sorts import sort_infer, sort_check, resolve_sorts

__all__ = [
    'step',
    'is_irreducible',
    'prepare',
    'sat_rq',
    'solve',
    'enumerate_answers',
    'prove',
    'sort_infer',
    'sort_check',
    'resolve_sorts',
]
