"""Random families shared by the gauge-equivalence and acceptance tests."""

from sflab.exactnum import FourierScalar
from sflab.foliation import random_multivector, random_poisson_deformation
from sflab.foliation.dirac import as_series
from sflab.foliation.generate import ad_exp_series
from sflab.gaugeequiv import unhat_map


def t_poly(ps, rng, degree, tdeg=2, density=0.4):
    """Random multivector over the (theta, t) ring with t-degree at most tdeg."""
    n = ps.n
    t = FourierScalar.variable(n, n + 1, 1)
    acc = ps.base_t.zero(degree)
    for p in range(tdeg + 1):
        m = random_multivector(rng, n, degree, n + 1, 1, density=density, nterms=1)
        acc = acc + (m * t ** p if p else m)
    return acc


def t_family(ps, rng, K, tdeg=2):
    """(W_t, X_t), both O(eps), with t-polynomial coefficients."""
    B = ps.base_t
    W = as_series([B.zero(2)] + [t_poly(ps, rng, 2, tdeg) for _ in range(K)], K)
    X = as_series([B.zero(1)] + [t_poly(ps, rng, 1, tdeg) for _ in range(K)], K)
    return W, X


def flow_family(ps, rng, K):
    """A genuine family: Pi + W^_t = exp(t eps ad_Y)(Pi + W') with X^_t = -eps Y."""
    B, n = ps.base_t, ps.n
    t = FourierScalar.variable(n, n + 1, 1)
    Wp = random_poisson_deformation(rng, B, K)
    Y = random_multivector(rng, n, 1, n + 1, 1, density=0.5, nterms=1)
    start = as_series([B.Pi] + list(Wp.coeffs[1:]), K)
    flowed = ad_exp_series(Y * t, start)
    W_hat = as_series([B.zero(2)] + list(flowed.coeffs[1:]), K)
    X_hat = as_series([B.zero(1), -Y] + [B.zero(1)] * (K - 1), K)
    W, X = unhat_map(ps, W_hat, X_hat)
    return W, X, W_hat, X_hat


def eps_bump(ps, V, order, K):
    """The series eps^order V."""
    B = ps.base_t
    coeffs = [B.zero(V.degree)] * (K + 1)
    coeffs[order] = V
    return as_series(coeffs, K)


# one line per acceptance criterion, echoed in the terminal summary
VERDICTS: dict[int, str] = {}


def verdict(number, ok, detail):
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'} ({detail})"
    VERDICTS[number] = line
    print(line)
    return ok
