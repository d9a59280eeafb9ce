"""Exception types shared across the package.

Validation problems (bad shapes, malformed files, inconsistent
configuration) and numerical failures (divergence, unsettled
trajectories, insufficient learning data) are kept in separate branches
so the command-line driver can map them to distinct exit codes.
"""


class TtmError(Exception):
    """Base class for all package-specific errors."""


class DimensionError(TtmError, ValueError):
    """An array has the wrong shape, or dimensions are inconsistent."""


class ConfigurationError(TtmError, ValueError):
    """Parameters are individually valid but mutually inconsistent."""


class SchemaError(TtmError, ValueError):
    """A data file does not match the expected on-disk schema."""


class NumericalError(TtmError, RuntimeError):
    """Base class for runtime numerical failures."""


class DivergenceError(NumericalError):
    """An integrator produced entries beyond the divergence guard."""

    def __init__(self, message, step=None, time=None):
        super().__init__(message)
        self.step = step
        self.time = time


class InsufficientLearningError(NumericalError):
    """The learned tensor tail never drops below the requested cutoff.

    Carries the offending tail norms so callers can judge how much
    longer the learning window would need to be.
    """

    def __init__(self, message, tail_norms=None):
        super().__init__(message)
        self.tail_norms = tail_norms


class NotSettledError(NumericalError):
    """A trajectory did not reach a stationary window."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class DegenerateStateError(NumericalError):
    """An operator has no resolvable Bloch axis."""
