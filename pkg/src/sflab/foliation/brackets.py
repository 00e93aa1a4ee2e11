"""The L-infinity[1] brackets on multivector fields attached to a complement G."""

from __future__ import annotations

from functools import cached_property
from typing import Sequence

from ..errors import ArityUnsupported
from ..exactnum import FieldElement, FourierScalar, Matrix
from ..linfty import LInftyAlgebra
from .multivector import (
    MultiVector,
    anchored_bracket,
    full_antisymmetric,
    lie_bracket,
    schouten,
    vector_apply,
    wedge_of_sharps,
)
from .setup import TorusPoissonSetup


def _apply(m: Matrix, v: Sequence[FourierScalar]) -> list[FourierScalar]:
    out = []
    for row in m.rows:
        acc = v[0] * 0
        for a, x in zip(row, v):
            if a and x:
                acc = acc + a * x
        out.append(acc)
    return out


def _pair(alpha: Sequence[FourierScalar], X: Sequence[FourierScalar]) -> FourierScalar:
    acc = X[0] * 0
    for a, x in zip(alpha, X):
        if a and x:
            acc = acc + a * x
    return acc


def lie_derivative_form(V: Sequence[FourierScalar], beta: Sequence[FourierScalar]) -> list[FourierScalar]:
    """(L_V beta)_j = V(beta_j) + sum_i beta_i d_j V^i."""
    n = len(V)
    return [vector_apply(V, beta[j]) + _pair(beta, [V[i].partial(j) for i in range(n)])
            for j in range(n)]


def exterior_derivative_1form(alpha: Sequence[FourierScalar]) -> Matrix:
    """(d alpha)_{ij} = d_i alpha_j - d_j alpha_i."""
    n = len(alpha)
    return Matrix([[alpha[j].partial(i) - alpha[i].partial(j) for j in range(n)] for i in range(n)])


class KoszulBrackets:
    """l_1, l_2, l_3 for a regular Poisson structure with complement G.

    l_1(P) = [Pi, P], l_2(P, Q) = (-1)^p [P, Q]_gamma and
    l_3(P, Q, R) = l3_sign * (-1)^q (P# ^ Q# ^ R#) Upsilon.
    """

    def __init__(self, setup: TorusPoissonSetup, l3_sign: int = -1):
        self.setup = setup
        self.n = setup.n
        self.l3_sign = l3_sign

    # the almost Lie algebroid (TM, [-,-]_gamma, pr_G)
    def anchor(self, X: Sequence[FourierScalar]) -> list[FourierScalar]:
        return _apply(self.setup.pr_G, X)

    def gamma_flat(self, X: Sequence[FourierScalar]) -> list[FourierScalar]:
        return _apply(self.setup.gamma_flat(), X)

    def vector_bracket(self, X: Sequence[FourierScalar], Y: Sequence[FourierScalar]) -> list[FourierScalar]:
        """[X, Y]_gamma = [pr_G X, pr_G Y] - Pi#(L_{pr_G X} iota_Y gamma - L_{pr_G Y} iota_X gamma)."""
        gX, gY = self.anchor(X), self.anchor(Y)
        base = lie_bracket(gX, gY)
        beta = [a - b for a, b in zip(lie_derivative_form(gX, self.gamma_flat(Y)),
                                      lie_derivative_form(gY, self.gamma_flat(X)))]
        corr = _apply(self.setup.sharp(), beta)
        return [a - b for a, b in zip(base, corr)]

    def _unit(self, i: int) -> list[FourierScalar]:
        s = self.setup
        return [s.scalar(1 if k == i else 0) for k in range(self.n)]

    @cached_property
    def anchor_columns(self) -> list[list[FourierScalar]]:
        return [self.setup.pr_G.column(i) for i in range(self.n)]

    @cached_property
    def structure(self) -> dict[tuple[int, int], MultiVector]:
        out = {}
        for i in range(self.n):
            for j in range(i + 1, self.n):
                c = self.vector_bracket(self._unit(i), self._unit(j))
                if any(c):
                    out[(i, j)] = MultiVector.vector(c)
        return out

    def gamma_bracket(self, P: MultiVector, Q: MultiVector) -> MultiVector:
        return anchored_bracket(P, Q, self.anchor_columns, self.structure)

    # the Courant tensor of G + G^0 pulled back to TM
    def upsilon_value(self, X, Y, Z) -> FourierScalar:
        g = self.setup.gamma
        prG = self.anchor

        def gam(U, V):
            return _pair(U, _apply(g, V))

        return (gam(X, lie_bracket(prG(Y), prG(Z))) + gam(Y, lie_bracket(prG(Z), prG(X)))
                + gam(Z, lie_bracket(prG(X), prG(Y))))

    @cached_property
    def upsilon(self) -> dict[tuple, FourierScalar]:
        """Components Upsilon(d_a, d_b, d_c) for a < b < c (zeros omitted)."""
        out = {}
        n = self.n
        for a in range(n):
            for b in range(a + 1, n):
                for c in range(b + 1, n):
                    v = self.upsilon_value(self._unit(a), self._unit(b), self._unit(c))
                    if v:
                        out[(a, b, c)] = v
        return out

    @cached_property
    def _upsilon_full(self):
        return full_antisymmetric(self.upsilon)

    def is_involutive(self) -> bool:
        return not self.upsilon

    # brackets
    def l1(self, P: MultiVector) -> MultiVector:
        return schouten(self.setup.Pi, P)

    def l2(self, P: MultiVector, Q: MultiVector) -> MultiVector:
        out = self.gamma_bracket(P, Q)
        return -out if P.degree & 1 else out

    def l3(self, P: MultiVector, Q: MultiVector, R: MultiVector) -> MultiVector:
        deg = P.degree + Q.degree + R.degree - 3
        if not self.upsilon or min(P.degree, Q.degree, R.degree) == 0:
            return self.setup.zero(max(deg, 0))
        out = wedge_of_sharps([P, Q, R], self._upsilon_full)
        sign = self.l3_sign * (-1 if Q.degree & 1 else 1)
        return out if sign > 0 else -out

    def bracket(self, k: int, *args: MultiVector) -> MultiVector:
        if len(args) != k:
            raise ArityUnsupported(f"l_{k} needs {k} arguments")
        if k == 1:
            return self.l1(*args)
        if k == 2:
            return self.l2(*args)
        if k == 3:
            return self.l3(*args)
        raise ArityUnsupported(f"l_{k} is not defined (only k = 1, 2, 3)")

    def algebra(self) -> LInftyAlgebra:
        """The structure as an L-infinity[1] algebra; a p-vector has degree p - 2."""
        s = self.setup
        brackets = {1: self.l1, 2: self.l2}
        if self.upsilon:
            brackets[3] = self.l3
        return LInftyAlgebra(
            brackets=brackets,
            degree=lambda P: P.degree - 2,
            zero=lambda d: MultiVector.zero(s.n, d + 2, s.dim, s.npoly),
            max_arity=3,
            basis=MultivectorBasis(s.n, s.dim, s.npoly),
            name=f"koszul[{s.name}]",
        )


def l_brackets(setup: TorusPoissonSetup, k: int, args: Sequence[MultiVector]) -> MultiVector:
    return KoszulBrackets(setup).bracket(k, *args)


class MultivectorBasis:
    """Topological basis exp(i k.theta) d_I of multivector fields for the coalgebra machinery.

    Keys are (I, k); the degree of a key is |I| - 2.
    """

    def __init__(self, n: int, dim: int, npoly: int = 0):
        self.n, self.dim, self.npoly = n, dim, npoly

    def degree(self, key) -> int:
        return len(key[0]) - 2

    def expand(self, P: MultiVector):
        out = {}
        for idx, f in P.comps.items():
            for k, c in f.terms.items():
                out[(idx, k)] = c
        return out

    def element(self, key) -> MultiVector:
        idx, k = key
        f = FourierScalar._raw(self.dim, self.npoly, {k: FieldElement(1)})
        return MultiVector._raw(self.n, len(idx), {idx: f}, self.dim, self.npoly)

    def assemble(self, coeffs, degree: int) -> MultiVector:
        comps: dict[tuple, dict] = {}
        for (idx, k), c in coeffs.items():
            if c:
                comps.setdefault(idx, {})[k] = c
        return MultiVector._raw(
            self.n, degree + 2,
            {idx: FourierScalar._raw(self.dim, self.npoly, t) for idx, t in comps.items()},
            self.dim, self.npoly)


# independent oracle: Courant tensor through the Dorfman bracket on TM + T*M

def dorfman(e1, e2):
    """[[X + a, Y + b]] = [X, Y] + L_X b - iota_Y da, sections given as (vector, covector)."""
    X, a = e1
    Y, b = e2
    da = exterior_derivative_1form(a)
    iY_da = [_pair(Y, da.column(j)) for j in range(len(Y))]  # (iota_Y da)_j = sum_i Y^i da_{ij}
    L = lie_derivative_form(X, b)
    return lie_bracket(X, Y), [l - m for l, m in zip(L, iY_da)]


def pairing(e1, e2) -> FourierScalar:
    (X, a), (Y, b) = e1, e2
    return _pair(a, Y) + _pair(b, X)


def upsilon_dorfman(kb: KoszulBrackets, X, Y, Z) -> FourierScalar:
    """<< e_X, [[e_Y, e_Z]] >> with e_V = pr_G V + iota_V gamma in G + G^0."""
    def lift(V):
        return kb.anchor(V), kb.gamma_flat(V)

    return pairing(lift(X), dorfman(lift(Y), lift(Z)))


class JacobiReport:
    def __init__(self):
        self.tested = 0
        self.failures: list[tuple[int, tuple[int, ...]]] = []

    @property
    def ok(self) -> bool:
        return not self.failures


def certify_jacobi(setup: TorusPoissonSetup, rng, trials: int = 100, max_arity: int = 4,
                   l3_sign: int = -1, max_degree: int = 3, nterms: int = 1) -> JacobiReport:
    """Exact higher Jacobi identities on random homogeneous good tuples, arities 1..max_arity.

    Trials are spread evenly over the arities; failures record (arity, degrees).
    """
    from ..linfty import jacobi_residual
    from .generate import random_good

    algebra = KoszulBrackets(setup, l3_sign=l3_sign).algebra()
    report = JacobiReport()
    for t in range(trials):
        k = 1 + t % max_arity
        degs = tuple(rng.randint(0, min(max_degree, setup.n)) for _ in range(k))
        args = [random_good(rng, setup, d, nterms=nterms) for d in degs]
        report.tested += 1
        if not jacobi_residual(algebra, k, args).is_zero():
            report.failures.append((k, degs))
    return report
