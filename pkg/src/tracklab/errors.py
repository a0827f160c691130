"""Exception types shared across the package."""


class TrackLabError(Exception):
    """Base class for all package-specific errors."""


class DimensionMismatchError(TrackLabError, ValueError):
    """An array does not have the dimension a map or norm expects."""


class NonConvergenceError(TrackLabError, RuntimeError):
    """An iterative solver failed to reach its tolerance.

    Carries the last residual and iteration count so callers can report
    diagnostics without re-running the solve.
    """

    def __init__(self, message, residual=None, iterations=None):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class NoBasinJumpError(TrackLabError, RuntimeError):
    """A target path does not cross the exceptional set (no basin jump)."""


class ScenarioError(TrackLabError, ValueError):
    """A scenario configuration failed validation."""
