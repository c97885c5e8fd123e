"""Exception types shared across the package."""


class RsweError(Exception):
    """Base class for all errors raised by :mod:`rswe_sbp`."""


class ConfigError(RsweError, ValueError):
    """Invalid configuration: bad keys, inadmissible parameters, bad mesh."""


class MeshValidityError(ConfigError):
    """The mapping produced a non-positive Jacobian somewhere."""


class DomainError(RsweError, ValueError):
    """An argument lies outside the domain of a function."""


class NumericalError(RsweError, ArithmeticError):
    """A run failed numerically."""


class PositivityError(NumericalError):
    """Water height became non-positive in the nonlinear model."""


class BlowupError(NumericalError):
    """Non-finite values appeared in the state or a tendency."""
