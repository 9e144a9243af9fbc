"""Exception hierarchy shared by every module."""


class GelfandError(Exception):
    """Base class for all errors raised by :mod:`gelfand`."""


class DomainError(GelfandError, ValueError):
    """A parameter lies outside the domain of an operation."""


class UnsupportedOrderError(DomainError):
    pass


class ConvergenceError(GelfandError, RuntimeError):
    """An iterative solver failed to converge."""

    def __init__(self, message, index=None):
        super().__init__(message)
        self.index = index


class IntegrationError(GelfandError, RuntimeError):
    """The integrand failed at a quadrature node."""

    def __init__(self, message, node=None):
        super().__init__(message)
        self.node = node


class GridError(GelfandError, ValueError):
    """Sampled functions live on incompatible or unsuitable grids."""


class ResolutionError(GelfandError):
    """A finite-difference step or grid is too coarse for the requested accuracy."""


class SymmetryError(GelfandError, TypeError):
    """A sampled function does not carry the symmetry an operation requires."""


class WeightError(GelfandError, ValueError):
    """Plancherel weights are missing or invalid."""


class UnsupportedPairError(GelfandError, ValueError):
    """The operation is not defined for this pair (e.g. K-types on a non-strong pair)."""


class SpecError(GelfandError, ValueError):
    """An invalid bump or interpolation specification."""


class InconclusiveError(GelfandError):
    """A verification could not reach a verdict."""


class DecayError(GelfandError):
    """Per-type data fail the decay precondition of an extension."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report
