"""Exception hierarchy shared by the library and the CLI.

Every exception carries the process exit code the CLI reports for it:

- 2: a resource cap was hit before an answer was certain
- 3: the input is malformed or outside the domain of the operation
- 4: an asserted mathematical statement failed on the input
"""

EXIT_OK = 0
EXIT_INCONCLUSIVE = 2
EXIT_INVALID = 3
EXIT_VIOLATION = 4


class JacresError(Exception):
    """Base class for all jacres errors."""

    exit_code: int = 1


class InvalidInputError(JacresError):
    """Input rejected: bad file, arity mismatch, unsupported ideal, ..."""

    exit_code = EXIT_INVALID


class ParseError(InvalidInputError):
    """Syntax error in a system or arc file, with a 1-based position."""

    def __init__(self, message: str, line: int = 0, column: int = 0):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


class ConfigError(InvalidInputError):
    """Invalid limits file or environment override."""


class InconclusiveError(JacresError):
    """A resource cap was exceeded; no answer is given rather than a wrong one."""

    exit_code = EXIT_INCONCLUSIVE

    def __init__(self, message: str, cap: str | None = None):
        self.cap = cap
        super().__init__(message)


class InvariantViolation(JacresError):
    """An asserted statement did not hold on the given input."""

    exit_code = EXIT_VIOLATION
