"""Seeded random generators of functions and (good) multivector fields."""

from __future__ import annotations

import itertools
import random

from ..exactnum import EpsSeries, FieldElement, FourierScalar
from .multivector import MultiVector
from .setup import TorusPoissonSetup, bigrade_decompose


def random_rational(rng: random.Random, bound: int = 3) -> FieldElement:
    num = rng.randint(-bound, bound)
    den = rng.randint(1, 2)
    return FieldElement(num) / den


def random_real_fourier(rng: random.Random, dim: int, nterms: int = 2, maxfreq: int = 1,
                        npoly: int = 0, axes: list[int] | None = None) -> FourierScalar:
    """Random real trigonometric polynomial (c_{-k} = conj c_k) on the chosen torus axes."""
    ntorus = dim - npoly
    axes = list(range(ntorus)) if axes is None else axes
    terms: dict[tuple, FieldElement] = {}
    for _ in range(nterms):
        k = [0] * dim
        for a in axes:
            k[a] = rng.randint(-maxfreq, maxfreq)
        k = tuple(k)
        mk = tuple(-x for x in k[:ntorus]) + k[ntorus:]
        c = random_rational(rng)
        if k == mk:
            terms[k] = terms.get(k, FieldElement(0)) + c
        else:
            d = random_rational(rng)
            z = c + d * FieldElement.i()
            terms[k] = terms.get(k, FieldElement(0)) + z
            terms[mk] = terms.get(mk, FieldElement(0)) + z.conj()
    return FourierScalar(dim, terms, npoly)


def random_multivector(rng: random.Random, n: int, degree: int, dim: int | None = None,
                       npoly: int = 0, density: float = 0.6, nterms: int = 2,
                       maxfreq: int = 1) -> MultiVector:
    dim = n if dim is None else dim
    comps = {}
    for idx in itertools.combinations(range(n), degree):
        if rng.random() < density:
            comps[idx] = random_real_fourier(rng, dim, nterms, maxfreq, npoly)
    return MultiVector(n, degree, comps, dim, npoly)


def good_part(W: MultiVector, setup: TorusPoissonSetup) -> MultiVector:
    """Drop the components with two or more legs along the complement."""
    acc = W.zero_like()
    for (p, q), part in bigrade_decompose(W, setup).items():
        if q <= 1:
            acc = acc + part
    return acc


def random_good(rng: random.Random, setup: TorusPoissonSetup, degree: int, **kw) -> MultiVector:
    W = random_multivector(rng, setup.n, degree, setup.dim, setup.npoly, **kw)
    return good_part(W, setup)


def ad_exp_series(Y: MultiVector, P: EpsSeries) -> EpsSeries:
    """e^{eps ad_Y} applied to a series P, truncated at the order of P."""
    from ..exactnum import EpsSeries
    from .multivector import schouten

    K = P.order
    out = list(P.coeffs)
    for m, Pm in enumerate(P.coeffs):
        term = Pm
        for j in range(1, K - m + 1):
            term = schouten(Y, term) * (FieldElement(1) / j)
            if not term.comps:
                break
            out[m + j] = out[m + j] + term
    return EpsSeries(out, K, zero=P.coeffs[0].zero_like())


def random_poisson_deformation(rng: random.Random, setup: TorusPoissonSetup, K: int,
                               nterms: int = 1) -> EpsSeries:
    """W with Pi + W Poisson up to O(eps^{K+1}) and W = O(eps).

    Pi + W = e^{eps ad_Y}((1 + eps g) Pi) for a random vector field Y and a
    random function g; g is replaced by a constant when g Pi fails to be
    Poisson-compatible with Pi.
    """
    from ..exactnum import EpsSeries
    from .multivector import schouten

    Pi = setup.Pi
    g = random_real_fourier(rng, setup.dim, nterms, 1, setup.npoly)
    gPi = Pi * g
    if schouten(Pi, gPi).comps or schouten(gPi, gPi).comps:
        gPi = Pi * random_rational(rng)
    base = EpsSeries([Pi, gPi], K, zero=Pi.zero_like())
    Y = random_multivector(rng, setup.n, 1, setup.dim, setup.npoly, density=0.5, nterms=nterms)
    flowed = ad_exp_series(Y, base)
    return EpsSeries([Pi.zero_like()] + list(flowed.coeffs[1:]), K, zero=Pi.zero_like())


def random_mc_series(rng: random.Random, setup: TorusPoissonSetup, K: int, nterms: int = 1):
    """A good Maurer-Cartan series Z (through order K) together with the W it came from."""
    from .dirac import inverse_dirac_exp

    W = random_poisson_deformation(rng, setup, K, nterms)
    return inverse_dirac_exp(setup, W), W


def tilted_family(rng: random.Random, setup: TorusPoissonSetup, bound: int = 2) -> EpsSeries:
    """W = (1 + eps c)(L1 + eps u1) ^ (L2 + eps u2) - Pi for Pi = L1 ^ L2 with constant leaf frame.

    Constant coefficients make every member Poisson of rank 2, exactly in eps.
    """
    from ..exactnum import EpsSeries
    from .multivector import wedge

    if setup.rank != 2:
        raise ValueError("tilted families need a rank-2 structure")
    n = setup.n
    L1, L2 = (MultiVector.vector(v) for v in setup.leaf_frame)
    if wedge(L1, L2) != setup.Pi or any(not f.is_constant() for v in setup.leaf_frame for f in v):
        raise ValueError("tilted families need Pi = L1 ^ L2 with a constant leaf frame")

    def const_vec():
        return MultiVector.vector([setup.scalar(random_rational(rng, bound)) for _ in range(n)])

    u1, u2 = const_vec(), const_vec()
    c = random_rational(rng, bound)
    a0, a1, a2 = wedge(L1, L2), wedge(L1, u2) + wedge(u1, L2), wedge(u1, u2)
    coeffs = [setup.zero(2), a1 + a0 * c, a2 + a1 * c, a2 * c]
    return EpsSeries(coeffs, 3, zero=setup.zero(2))
