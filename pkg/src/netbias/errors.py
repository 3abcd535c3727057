"""Exception hierarchy shared by all modules.

The CLI maps these onto exit codes: ``InputError`` -> 1,
``InfeasibleParameterError`` -> 2, ``ConsistencyError`` -> 3.
"""


class NetbiasError(Exception):
    pass


class InputError(NetbiasError, ValueError):
    """Malformed or out-of-domain input."""


class DegenerateGraphError(InputError):
    pass


class ParseError(InputError):
    def __init__(self, message, path=None, line_number=None):
        self.path = path
        self.line_number = line_number
        where = ""
        if path is not None:
            where = f"{path}:{line_number}: " if line_number is not None else f"{path}: "
        super().__init__(where + message)


class InfeasibleParameterError(InputError):
    """Parameters are well-formed but cannot be satisfied by this graph."""


class CoverageError(InfeasibleParameterError):
    def __init__(self, message, reached):
        self.reached = reached
        super().__init__(message)


class NonTerminationError(InfeasibleParameterError):
    pass


class ConsistencyError(NetbiasError):
    """An internal invariant does not hold."""


class SingularMatrixError(InputError):
    def __init__(self, message, collinear=()):
        self.collinear = tuple(collinear)
        super().__init__(message)
