"""Exception hierarchy.

Validation problems (bad parameters, unphysical geometries) derive from
``ValidationError``; failures of a numerical procedure derive from
``NumericalError``. The CLI maps the two families onto different exit codes.
"""


class GreybodyError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(GreybodyError, ValueError):
    pass


class NumericalError(GreybodyError, ArithmeticError):
    pass


class GeometryError(ValidationError):
    """Parameters violate a basic positivity requirement."""


class NoHorizonError(ValidationError):
    """The geometry has no (outer) event horizon."""


class DimensionError(ValidationError):
    """Spacetime dimension outside the supported range."""


class DomainError(ValidationError):
    """A radius lies outside the domain of the requested function."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class UnsupportedChargeError(ValidationError):
    """Formula defined only for electric charge was given a magnetic charge."""


class UnsupportedFamilyError(ValidationError):
    """Operation is not available for the requested black-hole family."""


class ExtremalSingularityError(ValidationError):
    """Formula is singular for an extremal geometry."""


class RadicandError(ValidationError):
    """A square root in a closed form has a negative argument."""

    def __init__(self, message, critical_omega=None):
        super().__init__(message)
        self.critical_omega = critical_omega


class DivergentIntegralError(NumericalError):
    """The barrier integral does not converge; ``term`` names the culprit."""

    def __init__(self, message, term=None):
        super().__init__(message)
        self.term = term


class ConvergenceError(NumericalError):
    """An iterative numerical procedure failed to reach its tolerance."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}
