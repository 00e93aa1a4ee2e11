"""Comparing the brackets of two complements G0, G1 to the same foliation."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from ..errors import NotComplementary
from ..exactnum import FourierScalar, Matrix
from ..linfty import (
    SymTensor,
    TaylorTable,
    codifferential,
    exp_coderivation,
    intertwine_residual,
)
from .brackets import KoszulBrackets, MultivectorBasis
from .multivector import MultiVector, full_antisymmetric, wedge_of_sharps
from .setup import TorusPoissonSetup


@dataclass
class SplittingPair:
    """Two complements with common Pi and leaves; eps: G0 -> TF has G1 = graph(eps)."""

    g0: TorusPoissonSetup
    g1: TorusPoissonSetup
    eps: Matrix  # eps o pr_G0 as an endomorphism of TM
    xi: Matrix  # xi[a][b] = xi(d_a, d_b)
    _xi_full: dict = field(default_factory=dict, repr=False)

    def xi_form(self) -> dict[tuple, FourierScalar]:
        if not self._xi_full:
            n = self.g0.n
            upper = {(a, b): self.xi.rows[a][b] for a in range(n) for b in range(a + 1, n)}
            self._xi_full.update(full_antisymmetric(upper))
        return self._xi_full

    def xi_value(self, V: Sequence[FourierScalar], W: Sequence[FourierScalar]) -> FourierScalar:
        acc = V[0] * 0
        for a, v in enumerate(V):
            for b, w in enumerate(W):
                x = self.xi.rows[a][b]
                if v and w and x:
                    acc = acc + v * x * w
        return acc


def change_of_splitting(g0: TorusPoissonSetup, g1: TorusPoissonSetup | Sequence) -> SplittingPair:
    """Build the pair, the map eps and the two-form xi; the eta identity is verified."""
    if not isinstance(g1, TorusPoissonSetup):
        g1 = g0.with_complement(g1)
    if g0.n != g1.n or g0.Pi != g1.Pi or not (g0.pr_TF - g1.pr_TF @ g0.pr_TF).is_zero():
        raise NotComplementary("the two setups do not share Pi and its leaves")
    ident = g0.pr_G.identity_like()
    eps = (g1.pr_G - ident) @ g0.pr_G
    gam = g0.gamma
    xi = -(gam @ eps) - eps.T @ gam + eps.T @ gam @ eps
    pair = SplittingPair(g0, g1, eps, xi)
    if not (eta_form(pair) - xi).is_zero():
        raise ArithmeticError("xi does not match the transported eta")
    return pair


def eta_form(pair: SplittingPair) -> Matrix:
    """The two-form obtained by transporting eta through R_{-Pi}.

    Its value on (V, W) is < -w(eps X) + eps*(w(eps X) - beta), W > with
    X = pr_G0 V and beta = iota_V gamma, where w = gamma on leaf vectors.
    """
    g0 = pair.g0
    flat = g0.gamma_flat()
    eX = pair.eps
    C = -(flat @ eX) + pair.eps.T @ (flat @ eX - flat)
    return C.T


def n2_apply(pair: SplittingPair, Q1: MultiVector, Q2: MultiVector) -> MultiVector:
    """N_2(Q1 . Q2) = (-1)^k (Q1# ^ Q2#) xi for a k-vector Q1."""
    if Q1.degree == 0 or Q2.degree == 0:
        return Q1.zero_like(max(Q1.degree + Q2.degree - 2, 0))
    out = wedge_of_sharps([Q1, Q2], pair.xi_form())
    return -out if Q1.degree & 1 else out


def n_coderivation(pair: SplittingPair) -> TaylorTable:
    basis = MultivectorBasis(pair.g0.n, pair.g0.dim, pair.g0.npoly)
    return TaylorTable({2: lambda a, b: n2_apply(pair, a, b)}, 0, basis)


def transposed_exp_N(pair: SplittingPair, bound: int = 3) -> TaylorTable:
    """tau o e^N o tau with tau(v) = -v; its n-th Taylor coefficient is (-1)^{n+1} (e^N)_n."""
    E = exp_coderivation(n_coderivation(pair), bound)

    def make(k):
        f = E.coeffs[k]
        if k % 2:
            return f
        return lambda *a: -f(*a)

    return TaylorTable({k: make(k) for k in E.coeffs}, 0, E.source)


@dataclass
class IntertwineReport:
    morphism: TaylorTable
    residuals: list
    words: list

    @property
    def ok(self) -> bool:
        return all(r.is_zero() for r in self.residuals)


def exp_N_and_intertwine(pair: SplittingPair, words: Sequence[SymTensor], bound: int = 3) -> IntertwineReport:
    """Residuals of tau e^N tau between the l^{G0} and l^{G1} codifferentials."""
    F = transposed_exp_N(pair, bound)
    Q0 = codifferential(KoszulBrackets(pair.g0).algebra())
    Q1 = codifferential(KoszulBrackets(pair.g1).algebra())
    Q0.source = Q0.target = F.source
    Q1.source = Q1.target = F.source
    residuals = [intertwine_residual(F, Q0, Q1, w) for w in words]
    return IntertwineReport(F, residuals, list(words))


def word_of(basis: MultivectorBasis, elements: Sequence[MultiVector]) -> SymTensor:
    return SymTensor.word(basis, elements)
