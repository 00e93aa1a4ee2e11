"""L-infinity[1] algebras, their residuals, and the symmetric coalgebra."""

from .algebra import (
    GaugePath,
    LInftyAlgebra,
    decalage_brackets,
    gauge_residual,
    jacobi_residual,
    mc_residual,
    series_instance,
)
from .coalgebra import (
    FiniteBasis,
    SymTensor,
    TaylorTable,
    Vec,
    canonical_word,
    coderivation_apply,
    coderivation_on_tensor2,
    coproduct,
    exp_apply,
    exp_coderivation,
    identity_table,
    intertwine_residual,
    morphism_apply,
    morphism_on_tensor2,
    random_words,
)
from .instances import SO3, abelian_instance, codifferential, lie_algebra_instance

__all__ = [
    "GaugePath", "LInftyAlgebra", "decalage_brackets", "gauge_residual", "jacobi_residual",
    "mc_residual", "series_instance",
    "FiniteBasis", "SymTensor", "TaylorTable", "Vec", "canonical_word", "coderivation_apply",
    "coderivation_on_tensor2", "coproduct", "exp_apply", "exp_coderivation", "identity_table",
    "intertwine_residual", "morphism_apply", "morphism_on_tensor2", "random_words",
    "SO3", "abelian_instance", "codifferential", "lie_algebra_instance",
]
