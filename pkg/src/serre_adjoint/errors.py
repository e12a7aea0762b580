"""Exception types raised by the computational core.

The CLI maps every :class:`ComputationError` to exit status 3.
"""


class ComputationError(Exception):
    """A well-formed request that cannot be computed as asked."""


class UnsupportedSpaceError(ComputationError):
    pass


class NotInSpaceError(ComputationError):
    pass


class InsufficientPrecisionError(ComputationError):
    pass


class PrecisionExhaustedError(ComputationError):
    """The q-expansion is too short to reach the summation horizon."""


class DivergentRegimeError(ComputationError):
    """The evaluation point lies outside the region of absolute convergence."""


class QuadratureNotConvergedError(ComputationError):
    pass


class UnsupportedRecipeError(ComputationError):
    pass
