"""Exact scalars, Fourier function rings on tori and truncated epsilon-series."""

from .field import (
    I,
    ONE,
    ZERO,
    FieldElement,
    field_arith,
    format_field,
    format_rational,
    radical,
    root_of_unity,
    set_radical,
)
from .fourier import FourierScalar, fourier_mul, fourier_partial, fourier_sum
from .linalg import (
    Matrix,
    field_inverse,
    field_rank,
    hstack,
    same_column_space,
    unit_inverse,
    vstack,
)
from .printing import format_fourier
from .series import EpsSeries, lift_bilinear, lift_multilinear, series_geometric_inverse

__all__ = [
    "I", "ONE", "ZERO", "FieldElement", "field_arith", "format_field", "format_rational",
    "radical", "root_of_unity", "set_radical",
    "FourierScalar", "fourier_mul", "fourier_partial", "fourier_sum", "format_fourier",
    "Matrix", "field_inverse", "field_rank", "hstack", "vstack", "same_column_space",
    "unit_inverse",
    "EpsSeries", "lift_bilinear", "lift_multilinear", "series_geometric_inverse",
]
