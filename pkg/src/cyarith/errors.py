"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes, so keep the classes few and meaningful.
"""


class CyArithError(Exception):
    """Base class for all errors raised by cyarith."""


class RingMismatchError(CyArithError, TypeError):
    """Operands live in different coefficient rings or have different arity."""


class PolyParseError(CyArithError, ValueError):
    """A polynomial literal could not be parsed.

    ``position`` is the 0-based character offset of the offending token.
    """

    def __init__(self, message: str, text: str, position: int):
        self.text = text
        self.position = position
        pointer = " " * position + "^"
        super().__init__(f"{message} at position {position}\n  {text}\n  {pointer}")


class PreconditionError(CyArithError, ValueError):
    """Input violates a documented precondition (malformed input)."""


class RuleRefused(CyArithError):
    """A deduction rule was asked to fire outside its hypotheses."""


class CrossCheckError(CyArithError, AssertionError):
    """Two independent computations of the same quantity disagree.

    This always signals an implementation bug, never bad input.
    """


class DegenerateReductionError(CyArithError):
    """A hyperplane vanishes or collides with another after reduction."""
