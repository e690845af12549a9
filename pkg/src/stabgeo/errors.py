"""Exception types shared across the package."""


class DegenerateBodyError(ValueError):
    """Body has empty interior or zero measure."""


class UnsupportedCombinationError(TypeError):
    """Operation is not defined for this mix of body representations."""


class InvalidCenterError(ValueError):
    """Polar center lies outside (or on the boundary of) the body."""


class EmptyFunctionError(ValueError):
    """Grid function has an empty positivity set."""


class ConvergenceError(RuntimeError):
    """Iterative search failed to converge.

    ``best`` carries the best iterate found so far, so callers can inspect
    or resume the search.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class ConfigError(ValueError):
    """Experiment configuration is invalid."""


class InvalidDataError(ValueError):
    """Data fails a precondition (nonpositive value, too few points, ...)."""


class NormalizationError(ValueError):
    """Input expected to be normalized to a probability function is not."""
