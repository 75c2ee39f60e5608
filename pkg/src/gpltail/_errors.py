"""Exception types raised by gpltail."""


class GPLError(Exception):
    """Base class for all package errors."""


class ParameterError(GPLError, ValueError):
    """A parameter lies outside its admissible range."""


class DomainError(GPLError, ValueError):
    """An argument lies outside the domain of the function."""


class ConvergenceError(GPLError, RuntimeError):
    """An iterative solver exhausted its iteration budget."""


class DegenerateSampleError(GPLError, ValueError):
    """The sample is too small or too degenerate for the requested operation."""


class SingularInformationError(GPLError, ArithmeticError):
    """The observed information matrix is not positive definite."""


class NoTailError(GPLError, RuntimeError):
    """No lower-bound candidate produced an acceptable power-law tail."""


class ValidationError(GPLError, ValueError):
    """Input data failed validation (bad CSV rows, duplicates, unmarked censored values)."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
