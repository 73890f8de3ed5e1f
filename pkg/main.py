#!/usr/bin/env python3
"""
rq-solve: satisfiability of restricted-quantifier formulas over finite sets
Command-line entry point
"""

import argparse
import logging
import sys

from algorithm.solver import prepare, solve, enumerate_answers, prove, Sat
from analysis.definitions import expand_definitions
from analysis.desugar import normalize
from analysis.fragments import classify
from config.constants import (
    DEFAULT_THEORY, DEFAULT_MAX_SOLUTIONS,
    EXIT_SAT, EXIT_UNSAT, EXIT_UNKNOWN, EXIT_INPUT_ERROR, EXIT_INTERRUPTED,
)
from config.theories import THEORY_FACTORIES, load_theory
from models.errors import ParseError
from ui.output_formatter import display_verdict, display_classification
from ui.parser import parse

logger = logging.getLogger('rq_solve')

EXIT_STATUS = {
    'sat': EXIT_SAT,
    'counterexample': EXIT_SAT,
    'unsat': EXIT_UNSAT,
    'proved': EXIT_UNSAT,
    'unknown': EXIT_UNKNOWN,
}


def build_parser():
    parser = argparse.ArgumentParser(
        prog='rq-solve',
        description="Decide formulas with restricted quantifiers over finite sets",
    )
    parser.add_argument('--verbose', '-v', action='store_true', help="debug logging")
    commands = parser.add_subparsers(dest='command', required=True)

    def add(name, help_text, solving=True):
        sub = commands.add_parser(name, help=help_text)
        sub.add_argument('file', metavar='FILE', help="input .slog file, or - for stdin")
        sub.add_argument('--theory', choices=sorted(THEORY_FACTORIES), default=DEFAULT_THEORY)
        sub.add_argument('--json', action='store_true', help="machine-readable output")
        if solving:
            sub.add_argument('--max-steps', type=int, default=None, metavar='N',
                             help="rule applications per branch before giving up")
            sub.add_argument('--trace', action='store_true', help="stream the rewrite log to stderr")
            sub.add_argument('--parallel', action='store_true',
                             help="explore the first choice point's branches concurrently")
        return sub

    solve_cmd = add('solve', "print sat with one answer, unsat or unknown")
    solve_cmd.add_argument('--all', action='store_true', help="enumerate answers")
    solve_cmd.add_argument('--max-solutions', type=int, default=None, metavar='N')
    enum_cmd = add('enumerate', "print every answer (up to --max-solutions)")
    enum_cmd.add_argument('--max-solutions', type=int, default=None, metavar='N')
    add('classify', "print the fragment and domain graph of the query", solving=False)
    add('prove', "solve the negated query: proved, or a counterexample")
    add('trace', "solve, printing every rule application")
    return parser


def read_input(path):
    if path == '-':
        return sys.stdin.read()
    try:
        with open(path, encoding='utf-8') as f:
            return f.read()
    except UnicodeDecodeError as e:
        raise ParseError(f"{path} is not UTF-8: {e}")
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e.strerror}")


def attach_trace(stream):
    trace = logging.getLogger('rq_solve.trace')
    handler = logging.StreamHandler(stream)
    handler.setFormatter(logging.Formatter('%(message)s'))
    trace.addHandler(handler)
    trace.setLevel(logging.INFO)
    trace.propagate = False
    return handler


def run_classify(program, args):
    theory = load_theory(args.theory)
    surface = normalize(expand_definitions(program), theory)
    display_classification(classify(surface), args.json)
    return EXIT_SAT


def run_prove(program, args):
    theory = load_theory(args.theory)
    verdict, prepared = prove(program, theory, max_steps=args.max_steps,
                              trace=args.trace, parallel=args.parallel)
    display_verdict(verdict, variables=prepared.variables, as_json=args.json,
                    fragment=prepared.fragment)
    return EXIT_STATUS[verdict.status]


def run_solve(program, args):
    theory = load_theory(args.theory)
    prepared = prepare(program, theory, max_steps=args.max_steps)
    enumerate_all = args.command == 'enumerate' or getattr(args, 'all', False)
    if enumerate_all or getattr(args, 'max_solutions', None) is not None:
        limit = args.max_solutions or DEFAULT_MAX_SOLUTIONS
        answers, verdict = enumerate_answers(prepared, limit, parallel=args.parallel)
    else:
        verdict = solve(prepared, parallel=args.parallel)
        answers = [verdict.first] if isinstance(verdict, Sat) else []
    display_verdict(verdict, answers, prepared.variables, args.json, prepared.fragment)
    return EXIT_STATUS[verdict.status]


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format='%(levelname)s %(name)s: %(message)s',
    )
    handler = None
    if args.command == 'trace':
        handler = attach_trace(sys.stdout)
    elif getattr(args, 'trace', False):
        handler = attach_trace(sys.stderr)
    try:
        program = parse(read_input(args.file))
        if args.command == 'classify':
            return run_classify(program, args)
        if args.command == 'prove':
            return run_prove(program, args)
        return run_solve(program, args)
    except KeyboardInterrupt:
        print("interrupted", file=sys.stderr)
        return EXIT_INTERRUPTED
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except Exception:
        logger.exception("unexpected failure")
        return EXIT_INPUT_ERROR
    finally:
        if handler is not None:
            trace = logging.getLogger('rq_solve.trace')
            trace.removeHandler(handler)
            trace.setLevel(logging.NOTSET)
            trace.propagate = True


if __name__ == "__main__":
    sys.exit(main())
