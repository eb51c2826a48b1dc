"""Exception types shared across the package."""


class MultireservoirError(Exception):
    """Base class for all package errors."""


class DimensionError(MultireservoirError):
    """Operands have incompatible or unexpected shapes."""


class SingularSystem(MultireservoirError):
    """A linear system is singular and no regularization was requested."""


class DegenerateMatrix(MultireservoirError):
    """A matrix has zero spectral radius and cannot be rescaled."""


class DegenerateSeries(MultireservoirError):
    """A time series is identically zero where a nonzero one is required."""


class Divergence(MultireservoirError):
    """A trajectory left the finite (or bounded) region.

    Carries the step index at which divergence was detected.
    """

    def __init__(self, step, message=None):
        self.step = step
        super().__init__(message or f"trajectory diverged at step {step}")


class NumericalFailure(MultireservoirError):
    """An iterative numerical procedure failed to converge."""


class WarmupViolation(MultireservoirError):
    """A time-shift embedding was requested inside the warmup window."""


class DataTooShort(MultireservoirError):
    """Not enough samples for the requested operation."""


class Indeterminate(MultireservoirError):
    """A geometric quantity (e.g. rotation sense) is degenerate."""


class ConfigError(MultireservoirError):
    """Invalid run configuration (unknown key, bad type, bad value)."""
