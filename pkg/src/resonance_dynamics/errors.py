"""Exception hierarchy shared by the numerical modules and the CLI."""


class ResonanceError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(ResonanceError, ValueError):
    """Argument outside the domain of a function (non-finite, wrong sign)."""


class SingularityError(ResonanceError, ValueError):
    """Evaluation requested at a point where the closed form is singular."""


class LightConeSingularity(SingularityError):
    """Evaluation too close to a light cone, where the bare-state model diverges."""


class StencilError(SingularityError):
    """A finite-difference stencil straddles a light-cone boundary."""


class ConvergenceError(ResonanceError, ArithmeticError):
    """Quadrature failed to reach its target; ``best_estimate`` holds the last value."""

    def __init__(self, message, best_estimate=None, error_estimate=None):
        super().__init__(message)
        self.best_estimate = best_estimate
        self.error_estimate = error_estimate


class ConfigError(ResonanceError, ValueError):
    """Invalid run configuration."""
