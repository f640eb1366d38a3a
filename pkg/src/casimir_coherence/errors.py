"""Exception types shared across the package."""


class CasimirError(Exception):
    """Base class for all errors raised by this package."""


class NumericalFailure(CasimirError, ArithmeticError):
    """An eigenvalue routine did not produce a consistent result.

    The ``residual`` attribute carries the size of the inconsistency.
    """

    def __init__(self, message, residual=float("nan")):
        super().__init__(message)
        self.residual = residual


class TruncationError(CasimirError, ValueError):
    """A Fock-space cutoff is too small for the requested state."""


class SupportError(CasimirError, ValueError):
    """Relative entropy requested with a reference state of insufficient support."""


class ConfigError(CasimirError, ValueError):
    """Invalid sweep or command-line configuration."""
