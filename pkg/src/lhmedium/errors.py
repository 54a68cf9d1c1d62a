"""Exception hierarchy shared by the analytic, optics and oracle layers."""


class LHMediumError(Exception):
    """Base class for all package errors."""


class ValidationError(LHMediumError, ValueError):
    """Invalid physical parameter or configuration value."""


class SingularityError(LHMediumError, ArithmeticError):
    """A closed-form expression hit an exact singularity."""


class PoleError(SingularityError):
    """A resonance or local-field denominator vanished within tolerance.

    ``point`` carries the parameter values at which the pole was detected so
    that sweep rows can be marked without losing context.
    """

    def __init__(self, message, point=None):
        super().__init__(message)
        self.point = dict(point or {})


class DegenerateSteadyStateError(LHMediumError, ArithmeticError):
    """The Liouvillian does not have a unique trace-one steady state."""


class ConfigError(LHMediumError):
    """Config file could not be parsed or failed validation."""
