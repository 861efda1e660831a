"""Robust binary64 complex division: eight algorithms, an exact oracle and
the experiments that compare them."""

from .algorithms import (
    ALGORITHMS,
    AlgorithmId,
    divide,
    divide_arrays,
    improved_divide,
    robust_divide,
    smith_divide,
)
from .fpkit import BINARY64, EXACT, bits_of_accuracy, complex_accuracy, format_hexfloat, parse_hexfloat
from .oracle import oracle_divide

__all__ = [
    "ALGORITHMS",
    "AlgorithmId",
    "BINARY64",
    "EXACT",
    "bits_of_accuracy",
    "complex_accuracy",
    "divide",
    "divide_arrays",
    "format_hexfloat",
    "improved_divide",
    "oracle_divide",
    "parse_hexfloat",
    "robust_divide",
    "smith_divide",
]

__version__ = "0.1.0"
