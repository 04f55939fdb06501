"""Exception hierarchy shared by every module of the package."""


class DecoherenceError(Exception):
    """Base class for all errors raised by :mod:`dipole_decoherence`."""


class DomainError(DecoherenceError, ValueError):
    """An argument lies outside the domain where the formula is defined."""


class RegimeError(DecoherenceError):
    """An approximation was requested outside the regime where it holds."""


class NumericError(DecoherenceError, ArithmeticError):
    """A numerical evaluation produced a non-finite or unconverged value."""


class QuadratureError(NumericError):
    """Adaptive quadrature failed to reach the requested tolerance.

    Attributes
    ----------
    achieved : float
        Relative error estimate actually reached.
    requested : float
        Relative tolerance that was asked for.
    """

    def __init__(self, message, achieved=float("nan"), requested=float("nan")):
        super().__init__(message)
        self.achieved = achieved
        self.requested = requested


class UnsupportedOperationError(DecoherenceError, TypeError):
    """The operation is not defined for this kind of object."""


class ConfigError(DecoherenceError):
    """A scenario configuration could not be parsed or validated.

    ``line`` and ``column`` are 1-based positions in the source text when known.
    """

    def __init__(self, message, line=None, column=None, field=None):
        location = ""
        if line is not None:
            location = f"line {line}"
            if column is not None:
                location += f", column {column}"
            location += ": "
        if field is not None:
            location += f"{field}: "
        super().__init__(location + message)
        self.line = line
        self.column = column
        self.field = field


class UnitError(ConfigError):
    """A value carried a unit whose dimension does not match the field."""
