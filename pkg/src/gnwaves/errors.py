"""Exception types raised by the solver stack."""


class GNWavesError(Exception):
    """Base class for all package errors."""


class ConfigurationError(GNWavesError, ValueError):
    """Invalid parameters or configuration (maps to CLI exit code 1)."""


class DegenerateParametersError(ConfigurationError):
    """The critical case delta**2 == gamma, where no solitary wave exists."""


class CavitationError(GNWavesError, ValueError):
    """A layer depth dropped below the clearance h0."""

    def __init__(self, message, min_depth=None):
        super().__init__(message)
        self.min_depth = min_depth


class PenaltyDomainError(GNWavesError, ValueError):
    """Iterate left the open ball where the penalization is finite."""


class NumericalFailure(GNWavesError, RuntimeError):
    """Base for numerical failures (maps to CLI exit code 2)."""


class ConvergenceError(NumericalFailure):
    """Iteration budget exhausted or damping failed to reduce the residual."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = list(trace or [])


class SingularJacobianError(ConvergenceError):
    """Newton matrix is numerically singular (typically near a fold)."""

    def __init__(self, message, condition=None, trace=None):
        super().__init__(message, trace)
        self.condition = condition
