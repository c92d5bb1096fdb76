"""Exception types shared across the package."""


class QalabError(Exception):
    """Base class for all package errors."""


class DimensionError(QalabError):
    """Operands have incompatible matrix dimensions."""


class NotObservableError(QalabError):
    """A Hermitian element was required but the input is not Hermitian."""


class NumericalError(QalabError):
    """A numerical routine failed or exceeded its certified tolerance."""


class IncompatibleObservablesError(QalabError):
    """Joint context requested for observables that do not commute."""


class NotInContextError(QalabError):
    """Observable is not diagonal in the given context."""


class InvalidStateError(QalabError):
    """Density operator violates Hermiticity, trace or positivity bounds."""


class ArgumentError(QalabError):
    """Invalid argument value (e.g. zero trial count)."""


class FileFormatError(QalabError):
    """Matrix/state file is malformed (shape mismatch, NaN/Inf, bad JSON)."""
