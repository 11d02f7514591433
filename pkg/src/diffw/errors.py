"""Exception types shared across the package."""


class DiffwError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatchError(DiffwError):
    """Input/output dimensions of two maps are incompatible."""


class UnsupportedOrderError(DiffwError):
    """A jet of higher order than the map can provide was requested."""


class NotQuasiInvertibleError(DiffwError):
    """The Neumann-series criterion for quasi-inversion fails (norm >= 1).

    The element may still be quasi-invertible; only the series route is
    refused.
    """


class NotInContractionRegionError(DiffwError):
    """A chart coordinate lies outside the region ``|phi|_{1,1} < 1 - margin``
    where the inversion contraction is guaranteed."""


class ConvergenceError(DiffwError):
    """An iteration (fixed point, ODE defect refinement) failed to reach its
    tolerance within the allowed number of steps."""


class ChartOverflowError(DiffwError):
    """A group-valued result left the radius on which the exp/log chart is
    defined."""


class SuiteConfigError(DiffwError):
    """A verification-suite configuration could not be parsed."""
