"""Exception hierarchy shared by all modules.

The CLI maps :class:`DomainError` to exit status 2 and
:class:`AccuracyError` to exit status 3.
"""


class RotwaveError(Exception):
    """Base class for all package errors."""


class DomainError(RotwaveError, ValueError):
    """An argument lies outside the domain of the operation."""


class RangeError(DomainError):
    """The result would overflow or underflow double precision."""


class ClassificationError(DomainError):
    """An operation requires a different arithmetic class of sigma = p/q."""


class ConfigurationError(DomainError):
    """A model or solver was configured inconsistently."""


class AccuracyError(RotwaveError, ArithmeticError):
    """A numerical method failed to reach its accuracy target.

    ``partial`` carries the best estimate available when the method gave up
    and ``diagnostics`` any extra context (iterates, brackets, budgets).
    """

    def __init__(self, message, partial=None, diagnostics=None):
        super().__init__(message)
        self.partial = partial
        self.diagnostics = diagnostics or {}


class SolverError(AccuracyError):
    """An iterative solver did not converge."""
