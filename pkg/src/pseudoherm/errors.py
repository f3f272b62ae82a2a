"""Exception hierarchy shared by every module.

The CLI maps these onto exit codes: :class:`UsageError` and
:class:`ConfigError` give 2, :class:`NumericError` and
:class:`CapacityError` give 3.
"""


class WorkbenchError(Exception):
    """Base class for all errors raised by :mod:`pseudoherm`."""


class UsageError(WorkbenchError, ValueError):
    """Arguments violate an operation's precondition (shapes, indices...)."""


class ConfigError(UsageError):
    """A run configuration could not be parsed or validated."""

    def __init__(self, message, line=None, column=None):
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)
        self.line = line
        self.column = column


class CapacityError(WorkbenchError):
    """Requested dimension exceeds the dense-storage limit."""

    def __init__(self, message, dim=None):
        if dim is not None and str(dim) not in message:
            message = f"{message} (dimension {dim})"
        super().__init__(message)
        self.dim = dim


class NumericError(WorkbenchError, ArithmeticError):
    """A numerical routine failed to converge or produced non-finite output."""


class DefinitenessError(NumericError):
    """A matrix that must be hermitian positive definite is not."""


class SingularityError(NumericError):
    """A potential was evaluated on (or too close to) its singular locus."""
