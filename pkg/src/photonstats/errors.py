"""Exception hierarchy shared by all modules."""


class PhotonStatsError(Exception):
    """Base class for every error raised by photonstats."""


class DomainError(PhotonStatsError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class InfeasibleError(DomainError):
    """No physical state realizes the requested parameters.

    ``feasible`` carries the admissible interval of the free parameter
    (or ``None`` when there is none).
    """

    def __init__(self, message, feasible=None):
        super().__init__(message)
        self.feasible = feasible


class CapacityError(PhotonStatsError):
    """A truncation would exceed the configured hard cutoff limit."""


class NumericUnderflowError(PhotonStatsError, ArithmeticError):
    """A quantity is too small to be divided by safely."""


class MalformedInputError(PhotonStatsError, ValueError):
    """An input file violates its schema.

    ``row`` is the 1-based data row number, when known.
    """

    def __init__(self, message, row=None):
        super().__init__(message if row is None else f"row {row}: {message}")
        self.row = row


class EstimationError(PhotonStatsError):
    """A sample record cannot support the requested estimate."""
