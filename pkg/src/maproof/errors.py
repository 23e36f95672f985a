"""Exception hierarchy shared by the library and the CLI.

Every error carries the process exit code the CLI maps it to:
2 for malformed input or misuse, 3 for capacity limits, 1 for a
verifier rejection that surfaces as an exception.
"""


class MAError(Exception):
    exit_code = 2


class UsageError(MAError, ValueError):
    """Caller passed something the operation is not defined for."""


class DomainError(MAError, ArithmeticError):
    """Mathematically undefined request, e.g. inverting zero."""


class CapacityError(MAError):
    exit_code = 3


class ParameterError(MAError):
    """Protocol parameters admit no valid instantiation."""


class ProofFormatError(MAError):
    """Raised by the binary proof parser; ``code`` says what went wrong."""

    def __init__(self, code: str, message: str):
        super().__init__(f"{code}: {message}")
        self.code = code


class ParseError(MAError):
    def __init__(self, message: str, line: int = 0, column: int = 0):
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(where + message)
        self.line = line
        self.column = column


class ProtocolError(MAError):
    exit_code = 1
