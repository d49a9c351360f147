"""
Exceptions and warnings raised by spectraltools.

Argument problems subclass :class:`ValueError` so that callers
catching the built-in keep working; failures of the numerical
pipelines subclass :class:`RuntimeError`.
"""


class InvalidArgumentError(ValueError):
    """An argument violates a documented precondition."""


class IdentifiabilityError(InvalidArgumentError):
    """Too few samples to identify the requested number of frequencies."""


class IllConditionedError(ArithmeticError):
    """
    A matrix that must have full column rank is numerically
    rank deficient.

    Parameters
    ----------
    ratio
        The ratio of smallest to largest singular value.
    """

    def __init__(self, ratio: float, message: str | None = None) -> None:
        self.ratio = ratio
        if message is None:
            message = (
                "Matrix is numerically rank deficient;"
                f" sigma_min / sigma_max = {ratio:.3e}."
            )
        super().__init__(message)


class EstimationError(RuntimeError):
    """A frequency or matrix estimate could not be produced."""


class InitializationError(EstimationError):
    """Too few admissible grid initializers for the requested rank."""


class NoSignalError(EstimationError):
    """Rank detection found no singular value above the threshold."""


class GeneratorInfeasibleError(RuntimeError):
    """A random problem instance could not be drawn."""


class GuaranteeRegimeWarning(UserWarning):
    """The input lies outside the regime covered by the error guarantees."""
