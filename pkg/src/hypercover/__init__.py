"""Exact tools for hyperplane almost-covers of the grid {0,...,m}^n."""

from .poly import Polynomial, falling_factorial, INFINITE
from .cover import (
    GridSpec,
    Hyperplane,
    CoverFamily,
    CoverReport,
    coverage_count,
    verify_almost_cover,
    construct_two_cover,
    construct_layered_cover,
    appendix_cover,
    lower_bound,
)

__version__ = "0.1.0"

__all__ = [
    "Polynomial",
    "falling_factorial",
    "INFINITE",
    "GridSpec",
    "Hyperplane",
    "CoverFamily",
    "CoverReport",
    "coverage_count",
    "verify_almost_cover",
    "construct_two_cover",
    "construct_layered_cover",
    "appendix_cover",
    "lower_bound",
]
