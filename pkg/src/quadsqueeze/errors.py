"""Exception hierarchy shared by every module."""


class QuadSqueezeError(Exception):
    """Base class for library errors."""


class DomainError(QuadSqueezeError, ValueError):
    """A time or coordinate lies outside the configured domain."""


class ConfigurationError(QuadSqueezeError, ValueError):
    """Invalid user input: bad initial data, grid too coarse, malformed config."""


class NumericError(QuadSqueezeError, RuntimeError):
    """An integrator or quadrature failed to reach its tolerance."""

    def __init__(self, message, tau=None, interval=None):
        super().__init__(message)
        self.tau = tau
        self.interval = interval


class CapacityError(QuadSqueezeError, ValueError):
    """A requested order exceeds the configured maximum."""


class ConvergenceWarning(UserWarning):
    """A truncated series or monitored invariant did not meet its target."""
