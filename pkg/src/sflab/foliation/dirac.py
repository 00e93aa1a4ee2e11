"""Deformations of a regular Poisson structure as truncated eps-series.

Bivector series are :class:`EpsSeries` of :class:`MultiVector` with a
common degree.  The gauge transform of Z by a two-form gamma is defined by
(Z^gamma)# = Z# (id + gamma_flat Z#)^{-1}; for series without an eps^0 term
the inverse is a finite geometric series.
"""

from __future__ import annotations

from typing import Sequence

from ..errors import DegreeError, NonSmallDeformation, NotGood, SingularAtSample
from ..exactnum import (
    EpsSeries,
    FieldElement,
    Matrix,
    field_inverse,
    field_rank,
    lift_multilinear,
    same_column_space,
    series_geometric_inverse,
    vstack,
)
from ..linfty import mc_residual, series_instance
from .brackets import KoszulBrackets
from .multivector import MultiVector, bivector_matrix, matrix_bivector, schouten
from .setup import TorusPoissonSetup, evaluate_matrix, is_good, sample_units


def series_zero(setup: TorusPoissonSetup, degree: int, K: int) -> EpsSeries:
    z = setup.zero(degree)
    return EpsSeries([z], K, zero=z)


def as_series(coeffs: Sequence[MultiVector], K: int) -> EpsSeries:
    coeffs = list(coeffs)
    z = coeffs[0].zero_like()
    return EpsSeries(coeffs, K, zero=z)


def series_schouten(A: EpsSeries, B: EpsSeries) -> EpsSeries:
    z = A.coeffs[0].zero_like(max(A.coeffs[0].degree + B.coeffs[0].degree - 1, 0))
    return lift_multilinear(schouten, A, B, zero=z)


def gauge_transform_series(Z: EpsSeries, gamma: Matrix, K: int | None = None) -> EpsSeries:
    """Z^gamma order by order, with skewness of every coefficient checked."""
    K = Z.order if K is None else K
    if K != Z.order:
        Z = EpsSeries(Z.coeffs, K, zero=Z.coeffs[0].zero_like())
    Z0 = Z.coeffs[0]
    if Z0.degree != 2 and any(c.comps for c in Z.coeffs):
        raise DegreeError("gauge transforms act on bivectors")
    n = Z0.n
    flat = gamma.T
    sharps = EpsSeries([bivector_matrix(c).T for c in Z.coeffs], K)
    prod = EpsSeries([flat @ s for s in sharps.coeffs], K)
    if not prod.coeffs[0].is_zero():
        raise NonSmallDeformation("the eps^0 part of gamma_flat o Z_sharp is nonzero")
    ident = prod.coeffs[0].identity_like()
    A = EpsSeries([ident] + list(prod.coeffs[1:]), K)
    inv = series_geometric_inverse(A)
    out_sharp = sharps @ inv
    coeffs = []
    for m in out_sharp.coeffs:
        if not m.T.is_skew():
            raise ArithmeticError("gauge-transformed bivector failed the skewness check")
        coeffs.append(matrix_bivector(m.T, n))
    return as_series(coeffs, K)


def dirac_exp(setup: TorusPoissonSetup, Z: EpsSeries) -> EpsSeries:
    """exp_G(Z) = Pi + Z^gamma."""
    Zg = gauge_transform_series(Z, setup.gamma)
    coeffs = list(Zg.coeffs)
    coeffs[0] = coeffs[0] + setup.Pi
    return as_series(coeffs, Z.order)


def inverse_dirac_exp(setup: TorusPoissonSetup, W: EpsSeries) -> EpsSeries:
    """Z with exp_G(Z) = Pi + W, i.e. Z = W^{-gamma}."""
    return gauge_transform_series(W, -setup.gamma)


def check_good_series(setup: TorusPoissonSetup, Z: EpsSeries) -> None:
    for j, c in enumerate(Z.coeffs):
        res = is_good(c, setup)
        if not res:
            raise NotGood(f"eps^{j} coefficient is not good (annihilator pair {res.witness[:2]})")


def mc_residual_G(setup: TorusPoissonSetup, Z: EpsSeries, brackets: KoszulBrackets | None = None) -> EpsSeries:
    """[Pi, Z] + 1/2 [Z, Z]_gamma - 1/6 (Z# ^ Z# ^ Z#) Upsilon, truncated at the series order."""
    check_good_series(setup, Z)
    kb = brackets or KoszulBrackets(setup)
    K = Z.order
    inst = series_instance(kb.algebra(), lambda d: series_zero(setup, d + 2, K))
    return mc_residual(inst, Z)


def poisson_residual(setup: TorusPoissonSetup, Z: EpsSeries) -> EpsSeries:
    """[exp_G Z, exp_G Z] truncated at the series order."""
    E = dirac_exp(setup, Z)
    return series_schouten(E, E)


# pointwise exact checks at rational sample points

def _pointwise_sharp(Z: EpsSeries | MultiVector, units, eps) -> Matrix:
    if isinstance(Z, EpsSeries):
        mats = [evaluate_matrix(bivector_matrix(c), units) for c in Z.coeffs]
        total = mats[0]
        power = FieldElement(1)
        for m in mats[1:]:
            power = power * eps
            total = total + m * power
        return total.T
    return evaluate_matrix(bivector_matrix(Z), units).T


def pointwise_exp(setup: TorusPoissonSetup, Z: EpsSeries, point, eps) -> Matrix:
    """(Pi + Z^gamma)# at a sample point with eps a number; exact, not truncated."""
    eps = FieldElement.coerce(eps)
    units = sample_units(point, setup.dim - setup.npoly)
    return exp_from_sharp(setup, _pointwise_sharp(Z, units, eps), units, point)


def exp_from_sharp(setup: TorusPoissonSetup, Zs: Matrix, units, point=()) -> Matrix:
    """Pi# + Z# (id + gamma_flat Z#)^{-1} for the value Z# of a bivector at one point."""
    flat = evaluate_matrix(setup.gamma_flat(), units)
    Pis = evaluate_matrix(setup.sharp(), units)
    M = Zs.identity_like() + flat @ Zs
    if not M.det():
        raise SingularAtSample(f"id + gamma_flat Z# is singular at {tuple(point)}")
    return Pis + Zs @ field_inverse(M)


def exact_mc_sharp(setup: TorusPoissonSetup, W: EpsSeries, point, eps) -> Matrix:
    """Z# = W# (id - gamma_flat W#)^{-1} at a point, for a polynomial family W in eps.

    This is the exact (untruncated) preimage of Pi + W under the Dirac exponential.
    """
    eps = FieldElement.coerce(eps)
    units = sample_units(point, setup.dim - setup.npoly)
    Ws = _pointwise_sharp(W, units, eps)
    flat = evaluate_matrix(setup.gamma_flat(), units)
    M = Ws.identity_like() - flat @ Ws
    if not M.det():
        raise SingularAtSample(f"id - gamma_flat W# is singular at {tuple(point)}")
    return Ws @ field_inverse(M)


def rank_at_sample(setup: TorusPoissonSetup, Z: EpsSeries, point, eps) -> int:
    return field_rank(pointwise_exp(setup, Z, point, eps))


def graph_transport_check(setup: TorusPoissonSetup, Z: EpsSeries, point, eps) -> bool:
    """gr(exp_G Z) = R_Pi R_gamma gr(Z) as subspaces of the fiber of TM + T*M at a point.

    Subspaces are column spans of 2n x n matrices (vector part on top).
    """
    eps = FieldElement.coerce(eps)
    units = sample_units(point, setup.dim - setup.npoly)
    Zs = _pointwise_sharp(Z, units, eps)
    flat = evaluate_matrix(setup.gamma_flat(), units)
    Pis = evaluate_matrix(setup.sharp(), units)
    ident = Zs.identity_like()
    # gr(Z) = {(Z# a, a)}; R_gamma: (v, a) -> (v, a + gamma_flat v); R_Pi: (v, a) -> (v + Pi# a, a)
    lower = ident + flat @ Zs
    upper = Zs + Pis @ lower
    transported = vstack(upper, lower)
    exp_sharp = pointwise_exp(setup, Z, point, eps)
    graph = vstack(exp_sharp, ident)
    return same_column_space(transported, graph)


def truncated_order(residual: EpsSeries) -> int | None:
    """Lowest eps order with a nonzero coefficient, or None if the residual vanishes."""
    return residual.lowest_order()
