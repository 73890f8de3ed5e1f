"""Concrete values and enumeration bounds used by the oracle and by answers

Atoms are str, integers are int, pairs are 2-tuples and finite sets are
frozensets, so structural equality of values is Python equality.
"""

from dataclasses import dataclass, field
from typing import Tuple

from config.constants import DEFAULT_ATOMS, DEFAULT_INT_RANGE, DEFAULT_MAX_SET_CARD


def is_atom(v):
    return isinstance(v, str)


def is_int(v):
    return isinstance(v, int) and not isinstance(v, bool)


def is_pair(v):
    return isinstance(v, tuple) and len(v) == 2


def is_set(v):
    return isinstance(v, frozenset)


def value_key(v):
    """Total order on values: integers, atoms, pairs, sets"""
    if is_int(v):
        return (0, v)
    if is_atom(v):
        return (1, v)
    if is_pair(v):
        return (2, value_key(v[0]), value_key(v[1]))
    if is_set(v):
        return (3, len(v), tuple(sorted(value_key(e) for e in v)))
    raise TypeError(f"not a value: {v!r}")


def format_value(v):
    """Render a value in surface syntax"""
    if is_int(v) or is_atom(v):
        return str(v)
    if is_pair(v):
        return f"[{format_value(v[0])},{format_value(v[1])}]"
    if is_set(v):
        return "{" + ",".join(format_value(e) for e in sorted(v, key=value_key)) + "}"
    raise TypeError(f"not a value: {v!r}")


@dataclass
class Universe:
    """Bounds of a brute-force enumeration"""
    atoms: Tuple[str, ...] = field(default=DEFAULT_ATOMS)
    int_lo: int = DEFAULT_INT_RANGE[0]
    int_hi: int = DEFAULT_INT_RANGE[1]
    max_set_card: int = DEFAULT_MAX_SET_CARD
    with_pairs: bool = False

    def __post_init__(self):
        self.atoms = tuple(self.atoms)
        if len(self.atoms) < 1:
            raise ValueError("Universe needs at least one atom")
        if self.int_lo > self.int_hi:
            raise ValueError(f"Empty integer range [{self.int_lo}, {self.int_hi}]")
        if self.max_set_card < 0:
            raise ValueError(f"max_set_card must be non-negative, got {self.max_set_card}")

    @property
    def ints(self):
        return tuple(range(self.int_lo, self.int_hi + 1))
