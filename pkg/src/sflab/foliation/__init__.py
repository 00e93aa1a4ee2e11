"""Regular Poisson structures on tori, their complements and deformation brackets."""

from .brackets import KoszulBrackets, MultivectorBasis, l_brackets, upsilon_dorfman
from .dirac import (
    check_good_series,
    dirac_exp,
    gauge_transform_series,
    graph_transport_check,
    inverse_dirac_exp,
    mc_residual_G,
    pointwise_exp,
    poisson_residual,
    rank_at_sample,
    series_schouten,
)
from .generate import random_good, random_mc_series, random_multivector, random_poisson_deformation
from .multivector import (
    MultiVector,
    bivector_matrix,
    format_multivector,
    interior,
    matrix_bivector,
    schouten,
    sharp_matrix,
    wedge,
)
from .setup import (
    TorusPoissonSetup,
    bigrade_decompose,
    is_good,
    kronecker_t3,
    twisted_t4,
    validate_projectors,
)
from .splitting import SplittingPair, change_of_splitting, exp_N_and_intertwine, transposed_exp_N

__all__ = [
    "KoszulBrackets", "MultivectorBasis", "l_brackets", "upsilon_dorfman",
    "check_good_series", "dirac_exp", "gauge_transform_series", "graph_transport_check",
    "inverse_dirac_exp", "mc_residual_G", "pointwise_exp", "poisson_residual", "rank_at_sample",
    "series_schouten", "random_good", "random_mc_series", "random_multivector",
    "random_poisson_deformation", "MultiVector", "bivector_matrix", "format_multivector",
    "interior", "matrix_bivector", "schouten", "sharp_matrix", "wedge",
    "TorusPoissonSetup", "bigrade_decompose", "is_good", "kronecker_t3", "twisted_t4",
    "validate_projectors", "SplittingPair", "change_of_splitting", "exp_N_and_intertwine",
    "transposed_exp_N",
]
