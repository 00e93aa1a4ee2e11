"""Functions on T*[2]A[1] for a trivial bundle A of rank r over an m-dimensional base.

Generators: base coordinates x_i (degree 0), fiber coordinates xi_a of A[1]
(degree 1), their conjugates theta_a (degree 1) and momenta p_i (degree 2).
Coefficients are functions of x: Fourier polynomials in m angles times
polynomials in m coordinate variables, so d/dx_i = d/d(angle_i) + d/d(coord_i).

Monomials are stored in the canonical order p's, theta's, xi's (each by
index) as keys (p_exponents, thetas, xis).  The bracket has degree -2:
    {p_i, x_j} = delta_ij,   {theta_a, xi_b} = delta_ab,
all other generator pairs bracket to zero.

Sections of the exterior algebra of A correspond to theta-polynomials and
forms on A to xi-polynomials; under this dictionary {X, alpha} = iota_X alpha.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .errors import BadBiDegree, ChartMismatch, ThetaNotMC
from .exactnum import FieldElement, FourierScalar, format_fourier
from .foliation.multivector import MultiVector, interior, merge_sign, wedge


@dataclass(frozen=True)
class SuperChart:
    m: int  # base dimension
    r: int  # rank of A

    @property
    def dim(self) -> int:
        return 2 * self.m

    def scalar(self, c) -> FourierScalar:
        return FourierScalar.constant(c, 2 * self.m, self.m)

    def coordinate(self, i: int) -> "SuperPoly":
        """The coordinate function x_i."""
        return SuperPoly(self, {self.unit_key(): FourierScalar.variable(self.m + i, 2 * self.m, self.m)})

    def angle_exp(self, k: Sequence[int]) -> FourierScalar:
        return FourierScalar.exp(tuple(k) + (0,) * self.m, 2 * self.m, self.m)

    def d_dx(self, f: FourierScalar, i: int) -> FourierScalar:
        return f.partial(i) + f.partial(self.m + i)

    def unit_key(self) -> tuple:
        return ((0,) * self.m, (), ())

    def one(self) -> "SuperPoly":
        return SuperPoly(self, {self.unit_key(): self.scalar(1)})

    def zero(self) -> "SuperPoly":
        return SuperPoly(self, {})

    def p(self, i: int) -> "SuperPoly":
        e = tuple(1 if j == i else 0 for j in range(self.m))
        return SuperPoly(self, {(e, (), ()): self.scalar(1)})

    def theta(self, a: int) -> "SuperPoly":
        return SuperPoly(self, {((0,) * self.m, (a,), ()): self.scalar(1)})

    def xi(self, a: int) -> "SuperPoly":
        return SuperPoly(self, {((0,) * self.m, (), (a,)): self.scalar(1)})


def key_degree(key) -> int:
    pe, th, xi = key
    return 2 * sum(pe) + len(th) + len(xi)


def key_bidegree(key) -> tuple[int, int]:
    pe, th, xi = key
    s = sum(pe)
    return s + len(th), s + len(xi)


def _key_mul(k1, k2) -> tuple[int, tuple | None]:
    pa, ta, xa = k1
    pb, tb, xb = k2
    # theta_a xi_a theta_b xi_b -> theta_a theta_b xi_a xi_b
    sign = -1 if (len(tb) * len(xa)) & 1 else 1
    s1, th = merge_sign(ta, tb)
    s2, xs = merge_sign(xa, xb)
    if not s1 or not s2:
        return 0, None
    return sign * s1 * s2, (tuple(a + b for a, b in zip(pa, pb)), th, xs)


class SuperPoly:
    __slots__ = ("chart", "terms")

    def __init__(self, chart: SuperChart, terms: Mapping[tuple, FourierScalar] | None = None):
        self.chart = chart
        self.terms = {k: f for k, f in (terms or {}).items() if f}

    def _check(self, o: "SuperPoly") -> None:
        if o.chart != self.chart:
            raise ChartMismatch(f"{self.chart} vs {o.chart}")

    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __add__(self, o: "SuperPoly") -> "SuperPoly":
        self._check(o)
        out = dict(self.terms)
        for k, f in o.terms.items():
            out[k] = out[k] + f if k in out else f
        return SuperPoly(self.chart, out)

    def __neg__(self):
        return SuperPoly(self.chart, {k: -f for k, f in self.terms.items()})

    def __sub__(self, o):
        return self + (-o)

    def scale(self, c) -> "SuperPoly":
        if isinstance(c, FourierScalar):
            return SuperPoly(self.chart, {k: f * c for k, f in self.terms.items()})
        c = FieldElement.coerce(c)
        return SuperPoly(self.chart, {k: f.scale(c) for k, f in self.terms.items()})

    def __mul__(self, o) -> "SuperPoly":
        if not isinstance(o, SuperPoly):
            return self.scale(o)
        self._check(o)
        out: dict[tuple, FourierScalar] = {}
        for k1, f in self.terms.items():
            for k2, g in o.terms.items():
                sign, k = _key_mul(k1, k2)
                if not sign:
                    continue
                h = f * g
                if sign < 0:
                    h = -h
                out[k] = out[k] + h if k in out else h
        return SuperPoly(self.chart, out)

    def __eq__(self, o):
        if not isinstance(o, SuperPoly):
            return NotImplemented
        return self.chart == o.chart and (self - o).is_zero()

    def __hash__(self):
        return hash(frozenset(self.terms))

    def degrees(self) -> set[int]:
        return {key_degree(k) for k in self.terms}

    def bidegrees(self) -> set[tuple[int, int]]:
        return {key_bidegree(k) for k in self.terms}

    def degree(self) -> int:
        ds = self.degrees()
        if len(ds) > 1:
            raise ValueError("inhomogeneous element")
        return ds.pop() if ds else 0

    def bidegree(self) -> tuple[int, int] | None:
        ds = self.bidegrees()
        if len(ds) > 1:
            raise BadBiDegree(f"element mixes bi-degrees {sorted(ds)}")
        return ds.pop() if ds else None

    def __repr__(self):
        return f"SuperPoly({format_superpoly(self)})"


def format_superpoly(f: SuperPoly) -> str:
    if not f.terms:
        return "0"
    parts = []
    for (pe, th, xi), c in sorted(f.terms.items(), key=lambda kv: (key_degree(kv[0]), kv[0])):
        word = [f"p{i + 1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(pe) if e]
        word += [f"theta{a + 1}" for a in th] + [f"xi{a + 1}" for a in xi]
        parts.append(f"({format_fourier(c)})" + ("*" + "*".join(word) if word else ""))
    return " + ".join(parts)


# derivatives

def _derivative(f: SuperPoly, kind: str, i: int, side: str) -> SuperPoly:
    chart = f.chart
    out: dict[tuple, FourierScalar] = {}

    def add(k, c):
        if c:
            out[k] = out[k] + c if k in out else c

    for key, c in f.terms.items():
        pe, th, xi = key
        if kind == "x":
            add(key, chart.d_dx(c, i))
        elif kind == "p":
            if pe[i]:
                add((pe[:i] + (pe[i] - 1,) + pe[i + 1:], th, xi), c.scale(pe[i]))
        elif kind == "theta":
            if i in th:
                k = th.index(i)
                odd = (len(th) - 1 - k + len(xi)) if side == "right" else k
                add((pe, th[:k] + th[k + 1:], xi), -c if odd & 1 else c)
        elif kind == "xi":
            if i in xi:
                k = xi.index(i)
                odd = (len(xi) - 1 - k) if side == "right" else (len(th) + k)
                add((pe, th, xi[:k] + xi[k + 1:]), -c if odd & 1 else c)
        else:
            raise ValueError(kind)
    return SuperPoly(chart, out)


def right_derivative(f: SuperPoly, kind: str, i: int) -> SuperPoly:
    return _derivative(f, kind, i, "right")


def left_derivative(f: SuperPoly, kind: str, i: int) -> SuperPoly:
    return _derivative(f, kind, i, "left")


def super_bracket(f: SuperPoly, g: SuperPoly) -> SuperPoly:
    """The canonical degree -2 Poisson bracket."""
    f._check(g)
    chart = f.chart
    acc = chart.zero()
    if not f.terms or not g.terms:
        return acc
    for i in range(chart.m):
        acc = acc + right_derivative(f, "p", i) * left_derivative(g, "x", i)
        acc = acc - right_derivative(f, "x", i) * left_derivative(g, "p", i)
    for a in range(chart.r):
        acc = acc + right_derivative(f, "theta", a) * left_derivative(g, "xi", a)
        acc = acc + right_derivative(f, "xi", a) * left_derivative(g, "theta", a)
    return acc


def restrict_P(f: SuperPoly) -> SuperPoly:
    """Restriction to the zero section: drop monomials containing p or theta."""
    return SuperPoly(f.chart, {k: c for k, c in f.terms.items() if not sum(k[0]) and not k[1]})


def in_forms(f: SuperPoly) -> bool:
    return all(not sum(k[0]) and not k[1] for k in f.terms)


# dictionary with exterior algebras of A and A*

def from_multivector(chart: SuperChart, P: MultiVector) -> SuperPoly:
    """A section of the exterior algebra of A as a theta-polynomial."""
    z = (0,) * chart.m
    return SuperPoly(chart, {(z, idx, ()): c for idx, c in P.comps.items()})


def from_form(chart: SuperChart, w: MultiVector) -> SuperPoly:
    """A form on A (components on the dual frame) as a xi-polynomial."""
    z = (0,) * chart.m
    return SuperPoly(chart, {(z, (), idx): c for idx, c in w.comps.items()})


def to_form(f: SuperPoly, degree: int | None = None) -> MultiVector:
    chart = f.chart
    if not in_forms(f):
        raise ValueError("element is not a form on A")
    degs = {len(k[2]) for k in f.terms}
    if degree is None:
        if len(degs) > 1:
            raise ValueError("inhomogeneous form")
        degree = degs.pop() if degs else 0
    return MultiVector._raw(chart.r, degree, {k[2]: c for k, c in f.terms.items()}, chart.dim, chart.m)


# V-data and derived brackets

@dataclass
class VData:
    """Ambient bracket, abelian subalgebra of forms, projection P and Theta in ker P."""

    chart: SuperChart
    theta: SuperPoly

    def __post_init__(self):
        if self.theta.terms:
            if self.theta.degree() != 3:
                raise ValueError("Theta must have total degree 3")
            if restrict_P(self.theta):
                raise ValueError("Theta must lie in the kernel of P")

    def is_mc(self) -> bool:
        return super_bracket(self.theta, self.theta).is_zero()

    def kernel_closed(self, samples: Iterable[tuple[SuperPoly, SuperPoly]]) -> bool:
        """{ker P, ker P} is contained in ker P on the given pairs (pairs taken in ker P)."""
        for a, b in samples:
            a, b = a - restrict_P(a), b - restrict_P(b)
            if restrict_P(super_bracket(a, b)):
                return False
        return True


def derived_multibrackets(vd: VData, inputs: Sequence[SuperPoly], certify: bool = True) -> SuperPoly:
    """P{...{{Theta, a_1}, a_2}, ..., a_k}."""
    if certify and not vd.is_mc():
        raise ThetaNotMC("{Theta, Theta} does not vanish")
    for a in inputs:
        if not in_forms(a):
            raise ValueError("derived brackets take inputs in the abelian subalgebra of forms")
    acc = vd.theta
    for a in inputs:
        if not acc.terms:
            break
        acc = super_bracket(acc, a)
    return restrict_P(acc)


def lie_theta(chart: SuperChart, structure: Mapping[tuple[int, int], Mapping[int, object]]) -> SuperPoly:
    """Theta = sum_{a<b} c_ab^c theta_a theta_b xi_c for structure constants [e_a, e_b] = c_ab^c e_c."""
    acc = chart.zero()
    for (a, b), row in structure.items():
        for c, v in row.items():
            acc = acc + (chart.theta(a) * chart.theta(b) * chart.xi(c)).scale(v)
    return acc


# the change-of-complement coderivation m = {eta, -}

def _check_eta(eta: SuperPoly) -> None:
    if eta.terms and eta.bidegree() != (2, 0):
        raise BadBiDegree(f"eta must have bi-degree (2, 0), got {sorted(eta.bidegrees())}")
    if any(sum(k[0]) for k in eta.terms):
        raise BadBiDegree("eta must be a bivector on A (no momenta)")


def taylor_M(eta: SuperPoly, word: Sequence[SuperPoly]) -> SuperPoly:
    """P{...{{eta, w_1}, w_2}, ..., w_k}."""
    _check_eta(eta)
    if not word:
        raise ValueError("empty word")
    acc = eta
    for w in word:
        if not in_forms(w):
            raise ValueError("inputs must be forms on A")
        acc = super_bracket(acc, w)
    return restrict_P(acc)


def m2_closed_form(eta: MultiVector, w1: MultiVector, w2: MultiVector) -> MultiVector:
    """(-1)^{|w1|} sum_{a,b} eta^{ab} (iota_a w1) ^ (iota_b w2), with |w1| the form degree."""
    acc = w1.zero_like(max(w1.degree + w2.degree - 2, 0))
    if w1.degree == 0 or w2.degree == 0:
        return acc
    for (a, b), c in eta.comps.items():
        term = wedge(interior(a, w1), interior(b, w2)) - wedge(interior(b, w1), interior(a, w2))
        acc = acc + term * c
    return -acc if w1.degree & 1 else acc


def two_form_flat(w: MultiVector):
    """Matrix of w_flat: column a holds the components of iota_a w."""
    from .foliation.multivector import bivector_matrix

    return bivector_matrix(w).T


def two_form_specialization(eta: MultiVector, w1: MultiVector, w2: MultiVector):
    """-w1_flat eta_sharp w2_flat - w2_flat eta_sharp w1_flat for two-forms."""
    from .foliation.multivector import sharp_matrix

    f1, f2, es = two_form_flat(w1), two_form_flat(w2), sharp_matrix(eta)
    return -(f1 @ es @ f2) - f2 @ es @ f1


# random elements for property checks

def random_superpoly(rng: random.Random, chart: SuperChart, degree: int, nterms: int = 3,
                     allow: str = "pxt", coeff_freq: int = 1) -> SuperPoly:
    """Random homogeneous element: allow picks among momenta (p), xi's (x) and theta's (t)."""
    from .foliation.generate import random_rational

    m, r = chart.m, chart.r
    out = chart.zero()
    for _ in range(nterms):
        npow = rng.randint(0, degree // 2) if "p" in allow and m else 0
        rest = degree - 2 * npow
        nth = rng.randint(0, min(rest, r)) if "t" in allow else 0
        nxi = rest - nth
        if nxi > r or ("x" not in allow and nxi):
            continue
        pe = [0] * m
        for _ in range(npow):
            pe[rng.randrange(m)] += 1
        th = tuple(sorted(rng.sample(range(r), nth)))
        xs = tuple(sorted(rng.sample(range(r), nxi)))
        k = tuple(rng.randint(-coeff_freq, coeff_freq) for _ in range(m)) + tuple(
            rng.randint(0, 1) for _ in range(m))
        c = FourierScalar(2 * m, {k: random_rational(rng)}, m)
        out = out + SuperPoly(chart, {(tuple(pe), th, xs): c})
    return out


def random_form(rng: random.Random, chart: SuperChart, degree: int, density: float = 0.7) -> MultiVector:
    from .foliation.generate import random_rational

    comps = {}
    for idx in itertools.combinations(range(chart.r), degree):
        if rng.random() < density:
            k = tuple(rng.randint(-1, 1) for _ in range(chart.m)) + (0,) * chart.m
            comps[idx] = FourierScalar(chart.dim, {k: random_rational(rng)}, chart.m)
    return MultiVector(chart.r, degree, comps, chart.dim, chart.m)
