"""Exception hierarchy shared by all modules."""


class ColligationError(Exception):
    """Base class for every error raised by this package."""


class ModeError(ColligationError, TypeError):
    """Exact and floating values were mixed, or an operation needs the other mode."""


class ShapeError(ColligationError, ValueError):
    """Sizes, block indices or variable lists do not match."""


class SingularError(ColligationError, ArithmeticError):
    """A matrix that has to be inverted is singular."""


class PoleError(SingularError):
    """``1 - d S~`` is singular: the point lies on the divisor of the colligation.

    ``residual`` is the determinant (exact) or the relative smallest singular
    value (float) that triggered the error.
    """

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class CapExceededError(ColligationError, ValueError):
    """A symbolic computation exceeds the configured size cap."""


class ReconstructionError(ColligationError, ArithmeticError):
    """Taylor-coefficient extraction failed or was not reliable.

    ``residual`` is the disagreement between two independent float
    extractions, when that is what triggered the error.
    """

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual
