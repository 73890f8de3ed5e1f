"""Configuration constants for the restricted-quantifier solver"""

# Solver budgets
OUTSIDE_FRAGMENT_STEP_BUDGET = 100_000  # Rule applications per branch when termination is not guaranteed
OUTSIDE_FRAGMENT_TOTAL_STEPS = 5_000    # Global cap across all branches under the default budget
TOTAL_STEP_FACTOR = 10                  # Global cap with an explicit --max-steps = budget * factor
DEFAULT_MAX_SOLUTIONS = 10              # Answers printed by --all unless --max-solutions is given
PARALLEL_WORKERS = 4                    # Threads used by --parallel
QUEUE_POLL_SECONDS = 0.05               # Parallel workers recheck cancellation this often when the queue is full

# Naming
FRESH_PREFIX = "_N"                     # Printed prefix of generated variables; rejected by the parser
FRESH_ATOM_PREFIX = "k"                 # Prefix of atoms invented for theory models

# Theories
DEFAULT_THEORY = "lia"

# Oracle (brute-force enumeration)
DEFAULT_ATOMS = ("a", "b", "c")
DEFAULT_INT_RANGE = (-3, 3)
DEFAULT_MAX_SET_CARD = 3
MAX_ENUMERATION = 2_000_000             # Valuations visited before the oracle refuses

# Exit statuses
EXIT_SAT = 0                            # Sat or Counterexample
EXIT_UNSAT = 1                          # Unsat or Proved
EXIT_UNKNOWN = 2
EXIT_INPUT_ERROR = 3
EXIT_INTERRUPTED = 130
