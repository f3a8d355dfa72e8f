"""Shared exception types."""


class MultiwellError(Exception):
    """Base class for package errors."""


class DomainError(MultiwellError, ValueError):
    """Argument outside the supported domain."""


class GridMismatchError(MultiwellError, ValueError):
    """Operation on wavefunctions living on different grids."""


class NormalizationError(MultiwellError):
    """Input state is not normalized or cannot be normalized."""


class ConstructionError(MultiwellError):
    """An exactly solvable model could not be built from the parameters."""


class NumericalError(MultiwellError):
    """A numerical routine failed to converge or lost accuracy."""


class NormDriftError(NumericalError):
    """Propagation norm drifted beyond tolerance."""

    def __init__(self, step, drift):
        super().__init__(f"norm drift {drift:.3e} at step {step}")
        self.step = step
        self.drift = drift


class EvaluationOverflow(MultiwellError, OverflowError):
    """Special-function evaluation would overflow double precision."""


class QuadratureError(NumericalError):
    """Quadrature order insufficient for the requested basis size."""
