"""Exception hierarchy shared by all modules.

Every error maps onto one of three CLI exit codes through ``exit_code``:
parse problems (2), violated preconditions (3) and unsupported scope (4).
"""


class FastTriError(Exception):
    exit_code = 3


class PreconditionError(FastTriError, ValueError):
    exit_code = 3


class InvalidRootError(PreconditionError):
    pass


class GridTooSmallError(PreconditionError):
    pass


class PrimeTooSmallError(PreconditionError):
    pass


class RetriesExhaustedError(PreconditionError):
    pass


class NoMainVariableError(PreconditionError):
    pass


class InvalidDivisorError(PreconditionError, ZeroDivisionError):
    pass


class RingMismatchError(PreconditionError):
    pass


class IndexRangeError(PreconditionError, IndexError):
    pass


class UnsupportedError(FastTriError):
    exit_code = 4


class BranchLimitError(FastTriError, RuntimeError):
    exit_code = 3


class NotInvertibleError(FastTriError, ArithmeticError):
    """Raised when an element is a zero-divisor modulo a chain.

    ``witness`` is a polynomial whose regularization modulo ``chain`` splits
    the computation so that the failing inverse can be retried per branch.
    """

    exit_code = 3

    def __init__(self, message, witness=None, chain=None):
        super().__init__(message)
        self.witness = witness
        self.chain = chain


class ParseError(FastTriError):
    exit_code = 2

    def __init__(self, message, line=1, column=1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column
