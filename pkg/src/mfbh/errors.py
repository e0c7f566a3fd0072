"""Exception types shared across the package."""


class BoseHubbardError(Exception):
    """Base class for errors raised by :mod:`mfbh`."""


class NumericalFailure(BoseHubbardError, ArithmeticError):
    """A numerical routine did not converge (cutoff cap, eigensolver, quadrature)."""


class DomainError(BoseHubbardError, ValueError):
    """The requested parameters lie outside the region where the quantity exists."""
