"""Exact polynomials, univariate roots and truncated series."""

from .poly import (
    Polynomial,
    arith,
    differentiate,
    evaluate_complex,
    format_polynomial,
    parse_polynomial,
)
from .roots import complex_roots, squarefree_decomposition, squarefree_part
from .series import ComplexSeries, compose_series, series_ratio

__all__ = [
    "ComplexSeries",
    "Polynomial",
    "arith",
    "complex_roots",
    "compose_series",
    "differentiate",
    "evaluate_complex",
    "format_polynomial",
    "parse_polynomial",
    "series_ratio",
    "squarefree_decomposition",
    "squarefree_part",
]
