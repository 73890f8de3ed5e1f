"""Error types raised on bad input"""


class ParseError(ValueError):
    """Syntax error in a program text, with its position"""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)


class DefinitionError(ValueError):
    """Duplicate, recursive or ill-formed predicate definitions"""


class SortError(ValueError):
    """A term used with two different sorts"""


class NegationError(ValueError):
    """Negation requested for a formula outside the negatable language"""


class DesugarError(ValueError):
    """Quantifier sugar that cannot be turned into core constraints"""


class TheoryError(ValueError):
    """Literal or functional predicate the active theory does not provide"""


class OracleError(ValueError):
    """Evaluation or enumeration request the oracle cannot serve"""
