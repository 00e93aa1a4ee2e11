"""Finite-dimensional example structures."""

from __future__ import annotations

from typing import Mapping

from ..exactnum import FieldElement
from .algebra import LInftyAlgebra, decalage_brackets
from .coalgebra import FiniteBasis, TaylorTable, Vec


def abelian_instance(degrees: Mapping[object, int]) -> LInftyAlgebra:
    basis = FiniteBasis(dict(degrees))
    return LInftyAlgebra(brackets={}, degree=lambda v: v.degree,
                         zero=lambda d: Vec({}, d), basis=basis, name="abelian")


def lie_bracket_from_constants(structure: Mapping[tuple[int, int], Mapping[int, object]]):
    """[e_a, e_b] = sum_c structure[(a,b)][c] e_c, extended bilinearly (skew)."""

    def bracket(x: Vec, y: Vec) -> Vec:
        out: dict = {}
        for a, xa in x.coeffs.items():
            for b, yb in y.coeffs.items():
                if (a, b) in structure:
                    row, sgn = structure[(a, b)], 1
                elif (b, a) in structure:
                    row, sgn = structure[(b, a)], -1
                else:
                    continue
                for c, v in row.items():
                    term = xa * yb * FieldElement.coerce(v) * sgn
                    out[c] = out[c] + term if c in out else term
        return Vec(out, x.degree + y.degree + 1)

    return bracket


def lie_algebra_instance(dim: int, structure) -> LInftyAlgebra:
    """L-infinity[1] algebra on g[1] obtained from a Lie algebra g by decalage.

    Elements carry degree -1; the unshifted Lie algebra sits in degree 0.
    """
    bracket = lie_bracket_from_constants(structure)
    m = decalage_brackets({2: bracket}, l_degree=lambda v: v.degree + 1)
    basis = FiniteBasis({a: -1 for a in range(dim)})
    return LInftyAlgebra(brackets=m, degree=lambda v: v.degree,
                         zero=lambda d: Vec({}, d), basis=basis, name="lie", max_arity=2)


def codifferential(inst: LInftyAlgebra) -> TaylorTable:
    """The degree 1 coderivation with Taylor coefficients m_k."""
    return TaylorTable(dict(inst.brackets), 1, inst.basis)


SO3 = {
    (0, 1): {2: 1},
    (1, 2): {0: 1},
    (2, 0): {1: 1},
}
