"""L-infinity[1] algebras given by evaluation callables, and their residuals."""

from __future__ import annotations

from dataclasses import dataclass
from math import factorial
from typing import Callable, Mapping, Sequence

from ..errors import ArityUnsupported, DegreeError
from ..exactnum import FieldElement, lift_multilinear
from ..exactnum.series import EpsSeries
from ..graded import koszul_sign, unshuffles


def _inv_factorial(k: int) -> FieldElement:
    return FieldElement(1) / factorial(k)


def _is_zero(x) -> bool:
    return x is None or x.is_zero()


def _accumulate(acc, term):
    if term is None:
        return acc
    return term if acc is None else acc + term


@dataclass(frozen=True)
class LInftyAlgebra:
    """Degree +1 graded-symmetric brackets m_k, k = 1..max_arity.

    ``brackets[k](*elements)`` evaluates m_k; missing arities are zero.
    ``degree(element)`` returns the degree in the shifted (L-infinity[1]) grading.
    ``zero(deg)`` builds the zero element of a given degree.
    """

    brackets: Mapping[int, Callable]
    degree: Callable[[object], int]
    zero: Callable[[int], object]
    max_arity: int = 3
    basis: object | None = None
    name: str = ""
    jacobi_bound: int = 4

    def bracket(self, k: int, *args):
        f = self.brackets.get(k)
        if f is None:
            return self.zero(sum(self.degree(a) for a in args) + 1)
        return f(*args)

    def has(self, k: int) -> bool:
        return k in self.brackets


def jacobi_residual(inst: LInftyAlgebra, n: int, inputs: Sequence):
    """sum_{i+j=n+1} sum_{sigma in Sh(i,n-i)} eps(sigma;v) m_j(m_i(v_sigma(1..i)), v_sigma(i+1..n))."""
    if n != len(inputs):
        raise ArityUnsupported(f"arity {n} but {len(inputs)} inputs")
    if not 1 <= n <= inst.jacobi_bound:
        raise ArityUnsupported(f"arity {n} outside 1..{inst.jacobi_bound}")
    degs = [inst.degree(v) for v in inputs]
    acc = None
    for i in range(1, n + 1):
        j = n + 1 - i
        if not (inst.has(i) and inst.has(j)):
            continue
        for sigma in unshuffles(i, n):
            word = sigma.act(inputs)
            inner = inst.bracket(i, *word[:i])
            if inner.is_zero():
                continue
            term = inst.bracket(j, inner, *word[i:])
            if koszul_sign(sigma, degs) < 0:
                term = -term
            acc = _accumulate(acc, term)
    if acc is None:
        return inst.zero(sum(degs) + 2)
    return acc


def mc_residual(inst: LInftyAlgebra, v):
    """sum_k (1/k!) m_k(v, ..., v)."""
    if inst.degree(v) != 0:
        raise DegreeError(f"Maurer-Cartan elements have degree 0, got {inst.degree(v)}")
    acc = None
    for k in range(1, inst.max_arity + 1):
        if inst.has(k):
            acc = _accumulate(acc, inst.bracket(k, *([v] * k)) * _inv_factorial(k))
    return acc if acc is not None else inst.zero(1)


@dataclass(frozen=True)
class GaugePath:
    """v_t = sum_j v[j] t^j (degree 0) and w_t = sum_j w[j] t^j (degree -1)."""

    v: tuple
    w: tuple
    degree_bound: int = 4

    def __post_init__(self):
        object.__setattr__(self, "v", tuple(self.v))
        object.__setattr__(self, "w", tuple(self.w))
        if max(len(self.v), len(self.w)) - 1 > self.degree_bound:
            raise DegreeError(f"t-degree exceeds the bound {self.degree_bound}")


def _poly_multilinear(f: Callable, polys: Sequence[Sequence]) -> list:
    """Multilinear map applied to t-polynomials (coefficient lists), no truncation."""
    total = sum(len(p) - 1 for p in polys)
    ser = [EpsSeries(list(p), total) for p in polys]
    return list(lift_multilinear(f, *ser).coeffs)


def gauge_residual(inst: LInftyAlgebra, path: GaugePath) -> list:
    """Coefficients of d v_t/dt - sum_k (1/k!) m_{k+1}(w_t, v_t, ..., v_t) in t."""
    for c in path.v:
        if not c.is_zero() and inst.degree(c) != 0:
            raise DegreeError("v_t must have degree 0")
    for c in path.w:
        if not c.is_zero() and inst.degree(c) != -1:
            raise DegreeError("w_t must have degree -1")
    v, w = list(path.v), list(path.w)
    out: dict[int, object] = {}
    for j in range(1, len(v)):
        out[j - 1] = v[j] * j
    for k in range(0, inst.max_arity):
        if not inst.has(k + 1):
            continue
        coeffs = _poly_multilinear(lambda *a, k=k: inst.bracket(k + 1, *a), [w] + [v] * k)
        for j, c in enumerate(coeffs):
            term = -(c * _inv_factorial(k))
            out[j] = term if j not in out else out[j] + term
    if not out:
        return [inst.zero(0)]
    return [out.get(j, inst.zero(0)) for j in range(max(out) + 1)]


def series_instance(inst: LInftyAlgebra, zero_series: Callable[[int], EpsSeries]) -> LInftyAlgebra:
    """The same brackets extended multilinearly to truncated eps-series of elements."""

    def degree(s: EpsSeries) -> int:
        for c in s.coeffs:
            if not c.is_zero():
                return inst.degree(c)
        return inst.degree(s.coeffs[0])

    def lift(k):
        f = inst.brackets[k]

        def g(*args):
            out_deg = sum(degree(a) for a in args) + 1
            z = zero_series(out_deg)
            return lift_multilinear(f, *args, zero=z.coeffs[0])

        return g

    return LInftyAlgebra(
        brackets={k: lift(k) for k in inst.brackets},
        degree=degree,
        zero=zero_series,
        max_arity=inst.max_arity,
        name=inst.name + "[eps]",
        jacobi_bound=inst.jacobi_bound,
    )


def decalage_brackets(l_brackets: Mapping[int, Callable], l_degree: Callable[[object], int]) -> dict:
    """m_k(v_1..v_k) = decalage_sign(k, |v_i|_L) * l_k(v_1..v_k).

    The degrees entering the sign are those of the unshifted L-infinity
    algebra; this choice reproduces m_2(P,Q) = (-1)^{|P|}[P,Q] for the Koszul
    bracket of a Poisson manifold (checked in the tests).
    """
    from ..graded import decalage_sign

    def make(k, f):
        def m(*args):
            s = decalage_sign(k, [l_degree(a) for a in args])
            out = f(*args)
            return out if s > 0 else -out
        return m

    return {k: make(k, f) for k, f in l_brackets.items()}
