"""Numerics for weighted diffeomorphism and mapping groups.

The library computes group operations of perturbation-of-identity
diffeomorphisms in a single global chart, evaluates weighted seminorms,
solves the chart-level evolution ODE, and bundles verification suites that
check every explicit derivative formula and estimate against independent
oracles.
"""

from .errors import (
    ChartOverflowError,
    ConvergenceError,
    DiffwError,
    DimensionMismatchError,
    NotInContractionRegionError,
    NotQuasiInvertibleError,
    SuiteConfigError,
    UnsupportedOrderError,
)

__version__ = "0.1.0"
