import itertools
import random
from fractions import Fraction

import pytest

from sflab.errors import (
    DegreeError,
    NonSmallDeformation,
    NotComplementary,
    NotGood,
    NotPoisson,
    SingularAtSample,
)
from sflab.exactnum import EpsSeries, FieldElement, FourierScalar, Matrix
from sflab.foliation import (
    KoszulBrackets,
    MultiVector,
    MultivectorBasis,
    TorusPoissonSetup,
    bigrade_decompose,
    bivector_matrix,
    change_of_splitting,
    dirac_exp,
    exp_N_and_intertwine,
    gauge_transform_series,
    graph_transport_check,
    is_good,
    kronecker_t3,
    l_brackets,
    matrix_bivector,
    mc_residual_G,
    poisson_residual,
    random_good,
    random_mc_series,
    random_multivector,
    rank_at_sample,
    schouten,
    series_schouten,
    twisted_t4,
    upsilon_dorfman,
    validate_projectors,
    wedge,
)
from sflab.foliation.brackets import certify_jacobi
from sflab.foliation.dirac import as_series, series_zero
from sflab.foliation.multivector import anchored_bracket, lie_bracket, vector_apply
from sflab.foliation.splitting import n2_apply, word_of
from sflab.linfty import decalage_brackets, jacobi_residual, LInftyAlgebra

from conftest import setup_named


def e(n, *idx, coeff=None):
    return MultiVector.basis(n, idx, coeff=coeff)


def sign(x):
    return -1 if x % 2 else 1


# Schouten calculus

def test_vector_field_on_function_coefficient():
    f = FourierScalar.cos((1, 2))
    lhs = schouten(e(2, 0), e(2, 1, coeff=f))
    assert lhs == e(2, 1, coeff=f.partial(0))


def test_kronecker_bivector_is_poisson(t3):
    assert schouten(t3.Pi, t3.Pi).is_zero()


def _triples(rng, n=3, count=30):
    for _ in range(count):
        degs = [rng.randint(0, 3) for _ in range(3)]
        yield degs, [random_multivector(rng, n, d, density=0.7) for d in degs]


def test_graded_antisymmetry_and_jacobi(rng):
    for (p, q, r), (P, Q, R) in _triples(rng):
        assert schouten(Q, P) == -(schouten(P, Q) * sign((p - 1) * (q - 1)))
        lhs = schouten(P, schouten(Q, R))
        rhs = schouten(schouten(P, Q), R) + schouten(Q, schouten(P, R)) * sign((p - 1) * (q - 1))
        assert lhs == rhs


def test_leibniz_rule(rng):
    for (p, q, r), (P, Q, R) in _triples(rng):
        lhs = schouten(P, wedge(Q, R))
        rhs = wedge(schouten(P, Q), R) + wedge(Q, schouten(P, R)) * sign((p - 1) * q)
        assert lhs == rhs


def test_reduces_to_lie_bracket_and_derivative(rng):
    for _ in range(10):
        X, Y = random_multivector(rng, 3, 1), random_multivector(rng, 3, 1)
        f = random_multivector(rng, 3, 0, density=1.0)
        assert schouten(X, Y) == MultiVector.vector(lie_bracket(X.vector_components(), Y.vector_components()))
        g = f.component(())
        assert schouten(X, f) == MultiVector.function(vector_apply(X.vector_components(), g), 3)


def test_anchored_bracket_with_identity_anchor_is_schouten(rng):
    n = 3
    anchor = [[FourierScalar.constant(1 if i == k else 0, n) for k in range(n)] for i in range(n)]
    for (p, q, _), (P, Q, _) in _triples(rng, count=10):
        assert anchored_bracket(P, Q, anchor, {}) == schouten(P, Q)


# setups and goodness

def test_setup_identities(torus):
    S = torus
    ident = S.pr_TF.identity_like()
    assert (S.sharp() @ S.gamma_flat() + S.pr_TF).is_zero()
    assert (S.gamma_flat() @ S.pr_G).is_zero()
    assert (S.pr_TF + S.pr_G - ident).is_zero()
    pts = [(Fraction(0),) * S.n, (Fraction(1, 4),) * S.n, tuple(Fraction(j, 8) for j in range(S.n))]
    assert S.check_regular(pts)


def test_non_poisson_bivector_is_rejected():
    n = 3
    one, zero = FourierScalar.constant(1, n), FourierScalar.constant(0, n)
    X = [one, zero, zero]
    Y = [zero, one, FourierScalar.sin((1, 0, 0))]
    Pi = wedge(MultiVector.vector(X), MultiVector.vector(Y))
    with pytest.raises(NotPoisson):
        TorusPoissonSetup(Pi, [X, Y], [[zero, zero, one]])


def test_complement_inside_leaves_is_rejected(t3):
    with pytest.raises(NotComplementary):
        t3.with_complement([t3.leaf_frame[0]])


def test_projector_validation():
    one, zero = FieldElement(1), FieldElement(0)
    P = Matrix([[one, one], [zero, zero]])
    validate_projectors(P, P.identity_like() - P)
    with pytest.raises(NotComplementary):
        validate_projectors(Matrix([[one, one], [zero, one]]), Matrix([[zero, -one], [zero, zero]]))
    with pytest.raises(NotComplementary):
        validate_projectors(P, P)


def test_pi_and_vectors_are_good(torus, rng):
    assert is_good(torus.Pi, torus)
    assert is_good(random_multivector(rng, torus.n, 1), torus)
    assert is_good(random_multivector(rng, torus.n, 0), torus)


def test_transverse_bivector_is_not_good(t4):
    G1 = MultiVector.vector(t4.complement_frame[0])
    G2 = MultiVector.vector(t4.complement_frame[1])
    W = wedge(G1, G2)
    res = is_good(W, t4)
    assert not res and res.witness is not None
    assert set(bigrade_decompose(W, t4)) == {(0, 2)}


def test_bigrading(torus, rng):
    assert set(bigrade_decompose(torus.Pi, torus)) == {(2, 0)}
    for d in range(torus.n + 1):
        W = random_multivector(rng, torus.n, d)
        parts = bigrade_decompose(W, torus)
        total = W.zero_like()
        for (p, q), part in parts.items():
            assert p + q == d
            total = total + part
        assert total == W
        assert bool(is_good(W, torus)) == all(q <= 1 for (_, q) in parts)


def test_transverse_t3_bivector_reassembles(t3):
    W = e(3, 1, 2)
    parts = bigrade_decompose(W, t3)
    assert sum(parts.values(), W.zero_like()) == W
    assert is_good(W, t3)  # the complement has rank one


# brackets

def test_l1_kills_constants(torus):
    assert l_brackets(torus, 1, [MultiVector.function(torus.scalar(7), torus.n)]).is_zero()


def test_l3_vanishes_for_involutive_complement(t3, rng):
    kb = KoszulBrackets(t3)
    assert kb.is_involutive()
    for _ in range(10):
        args = [random_good(rng, t3, rng.randint(1, 3)) for _ in range(3)]
        assert kb.l3(*args).is_zero()


def test_twisted_complement_is_not_involutive(t4):
    assert not KoszulBrackets(t4).is_involutive()
    assert KoszulBrackets(setup_named("t4g0")).is_involutive()


def test_courant_tensor_matches_dorfman_oracle(torus, rng):
    kb = KoszulBrackets(torus)
    n = torus.n
    unit = lambda i: [torus.scalar(1 if k == i else 0) for k in range(n)]
    for a, b, c in itertools.combinations(range(n), 3):
        assert kb.upsilon_value(unit(a), unit(b), unit(c)) == upsilon_dorfman(kb, unit(a), unit(b), unit(c))
    for _ in range(5):
        vs = [random_multivector(rng, n, 1, density=1.0).vector_components() for _ in range(3)]
        assert kb.upsilon_value(*vs) == upsilon_dorfman(kb, *vs)


def test_twisted_courant_tensor_value(t4):
    kb = KoszulBrackets(t4)
    G1, G2 = t4.complement_frame
    V = [t4.scalar(0), t4.scalar(1), t4.scalar(0), t4.scalar(0)]
    # [G1, G2] = -cos(theta4) d1 and gamma pairs d1 with d2
    val = kb.upsilon_value(G1, G2, V)
    assert val == upsilon_dorfman(kb, G1, G2, V)
    assert not val.is_zero()


@pytest.mark.parametrize("k", [1, 2, 3])
def test_brackets_preserve_goodness(torus, k):
    rng = random.Random(100 + k)
    kb = KoszulBrackets(torus)
    for _ in range(100 if k < 3 else 40):
        args = [random_good(rng, torus, rng.randint(0, min(3, torus.n)), nterms=1) for _ in range(k)]
        assert is_good(kb.bracket(k, *args), torus)


def test_jacobi_certification(torus):
    rep = certify_jacobi(torus, random.Random(5), trials=40)
    assert rep.ok and rep.tested == 40


def test_opposite_ternary_sign_breaks_jacobi(t4):
    rep = certify_jacobi(t4, random.Random(5), trials=60, l3_sign=+1)
    assert not rep.ok
    assert all(k >= 3 for k, _ in rep.failures)


def test_koszul_dgla_decalage(t3, rng):
    """Shifting (d_Pi, [.,.]) by decalage gives m_2(P, Q) = (-1)^{|P|}[P, Q]."""
    Pi = t3.Pi
    m = decalage_brackets({1: lambda P: schouten(Pi, P), 2: schouten}, l_degree=lambda P: P.degree - 1)
    alg = LInftyAlgebra(m, degree=lambda P: P.degree - 2,
                        zero=lambda d: MultiVector.zero(3, d + 2), max_arity=2)
    for _ in range(15):
        P, Q, R = (random_multivector(rng, 3, rng.randint(0, 3)) for _ in range(3))
        assert alg.bracket(1, P) == schouten(Pi, P)
        assert alg.bracket(2, P, Q) == schouten(P, Q) * sign(P.degree)
        for k in (1, 2, 3):
            assert jacobi_residual(alg, k, [P, Q, R][:k]).is_zero()


# deformations

def test_mc_of_zero(torus):
    assert mc_residual_G(torus, series_zero(torus, 2, 4)).is_zero()


def test_mc_rejects_bad_series(t4):
    G1, G2 = (MultiVector.vector(v) for v in t4.complement_frame)
    Z = as_series([t4.zero(2), wedge(G1, G2)], 2)
    with pytest.raises(NotGood):
        mc_residual_G(t4, Z)


@pytest.mark.parametrize("c", [1, Fraction(-1, 2), 3])
def test_rescaled_pi(torus, c):
    Z = as_series([torus.zero(2), torus.Pi * c], 4)
    E = dirac_exp(torus, Z)
    for j in range(5):
        assert E[j] == torus.Pi * (FieldElement(c) ** j if j else 1)
    assert series_schouten(E, E).is_zero()
    assert mc_residual_G(torus, Z).is_zero()
    assert poisson_residual(torus, Z).is_zero()


def test_exp_of_zero(torus):
    E = dirac_exp(torus, series_zero(torus, 2, 3))
    assert E[0] == torus.Pi and all(c.is_zero() for c in E.coeffs[1:])


def test_mc_equivalence_and_sensitivity(torus):
    rng = random.Random(9)
    for _ in range(3):
        Z, _ = random_mc_series(rng, torus, 4)
        assert mc_residual_G(torus, Z).is_zero()
        assert poisson_residual(torus, Z).is_zero()
    coeffs = list(Z.coeffs)
    d = random_good(rng, torus, 2)
    while schouten(torus.Pi, d).is_zero():
        d = random_good(rng, torus, 2)
    coeffs[1] = coeffs[1] + d
    Zp = EpsSeries(coeffs, 4)
    r1, r2 = mc_residual_G(torus, Zp), poisson_residual(torus, Zp)
    assert r1.lowest_order() == r2.lowest_order() == 1


def test_transverse_gauge_transform_is_trivial():
    S = twisted_t4("G0")
    Z = as_series([S.zero(2), e(4, 2, 3), e(4, 2, 3) * 5], 3)
    assert gauge_transform_series(Z, S.gamma) == Z


def test_nilpotent_gauge_transform():
    S = twisted_t4("G0")
    Z1 = e(4, 0, 2) + e(4, 1, 3)
    flat, sharp = S.gamma_flat(), bivector_matrix(Z1).T
    assert (flat @ sharp @ flat @ sharp).is_zero()
    Zg = gauge_transform_series(as_series([S.zero(2), Z1], 4), S.gamma)
    expected2 = matrix_bivector((-(sharp @ flat @ sharp)).T, 4)
    assert not expected2.is_zero()
    assert Zg[1] == Z1 and Zg[2] == expected2 and Zg[3].is_zero() and Zg[4].is_zero()


def test_gauge_transform_of_random_good_series_is_skew(torus, rng):
    Z = as_series([torus.zero(2)] + [random_good(rng, torus, 2) for _ in range(4)], 4)
    Zg = gauge_transform_series(Z, torus.gamma)
    assert all(bivector_matrix(c).is_skew() for c in Zg.coeffs)
    # gauge transforms by gamma and -gamma are inverse to each other
    assert gauge_transform_series(Zg, -torus.gamma) == Z


def test_non_small_deformation(torus):
    with pytest.raises(NonSmallDeformation):
        gauge_transform_series(as_series([torus.Pi], 2), torus.gamma)


def test_gauge_transform_degree_check(torus):
    with pytest.raises(DegreeError):
        gauge_transform_series(as_series([torus.zero(3), e(torus.n, 0, 1, 2)], 2), torus.gamma)


POINTS = [(0, 0, 0, 0), (Fraction(1, 4),) * 4, (Fraction(1, 8), Fraction(1, 2), 0, Fraction(3, 4)),
          (Fraction(5, 8), 0, Fraction(1, 4), Fraction(1, 8)), (Fraction(1, 2),) * 4]


def test_graph_transport_and_rank(torus):
    rng = random.Random(13)
    Z, _ = random_mc_series(rng, torus, 4)
    for pt in POINTS:
        pt = tuple(Fraction(x) for x in pt[:torus.n])
        assert graph_transport_check(torus, Z, pt, Fraction(1, 10))
        assert rank_at_sample(torus, Z, pt, Fraction(1, 10)) == torus.rank
    zero = series_zero(torus, 2, 2)
    assert graph_transport_check(torus, zero, (Fraction(0),) * torus.n, 0)


def test_singular_sample(torus):
    Z = as_series([torus.zero(2), torus.Pi], 1)
    with pytest.raises(SingularAtSample):
        rank_at_sample(torus, Z, (Fraction(0),) * torus.n, 1)
    with pytest.raises(SingularAtSample):
        graph_transport_check(torus, Z, (Fraction(0),) * torus.n, 1)


# change of splitting

def test_same_complement_gives_trivial_pair(torus):
    pair = change_of_splitting(torus, torus)
    assert pair.eps.is_zero() and pair.xi.is_zero()
    basis = MultivectorBasis(torus.n, torus.dim)
    rng = random.Random(3)
    words = [word_of(basis, [random_good(rng, torus, 2, nterms=1), random_good(rng, torus, 1, nterms=1)])]
    rep = exp_N_and_intertwine(pair, words)
    assert rep.ok
    for w in words:
        from sflab.linfty import morphism_apply
        assert morphism_apply(rep.morphism, w) == w


def test_t3_splitting_map(t3):
    pair = change_of_splitting(t3, setup_named("t3g1"))
    d2 = [t3.scalar(0), t3.scalar(1), t3.scalar(0)]
    image = [sum((pair.eps.rows[i][j] * d2[j] for j in range(3)), t3.scalar(0)) for i in range(3)]
    assert image == [t3.scalar(0), t3.scalar(0), t3.scalar(1)]


def test_xi_vanishes_on_leaves(t3, t4):
    from sflab.foliation.generate import random_real_fourier
    rng = random.Random(14)
    for S, other in [(t3, setup_named("t3g1")), (setup_named("t4g0"), t4)]:
        pair = change_of_splitting(S, other)
        L1, L2 = S.leaf_frame

        def leaf_vector():
            f, g = random_real_fourier(rng, S.n), random_real_fourier(rng, S.n)
            return [f * x + g * y for x, y in zip(L1, L2)]

        for _ in range(20):
            assert pair.xi_value(leaf_vector(), leaf_vector()).is_zero()


def test_non_complementary_pair(t3):
    other = kronecker_t3(slope=1)
    with pytest.raises(NotComplementary):
        change_of_splitting(t3, other)


def test_n2_with_function_input(t3):
    pair = change_of_splitting(t3, setup_named("t3g1"))
    f = MultiVector.function(FourierScalar.cos((1, 0, 0)), 3)
    assert n2_apply(pair, f, t3.Pi).is_zero()
    assert n2_apply(pair, t3.Pi, f).is_zero()


def test_n2_of_pi_with_itself(t3):
    pair = change_of_splitting(t3, setup_named("t3g1"))
    out = n2_apply(pair, t3.Pi, t3.Pi)
    assert out.degree == 2
    assert all(q <= 1 for (_, q) in bigrade_decompose(out, t3))


def test_n2_preserves_goodness(torus):
    other = setup_named("t3g1") if torus.n == 3 else setup_named("t4g0")
    pair = change_of_splitting(torus, other)
    rng = random.Random(15)
    for _ in range(50):
        Q1 = random_good(rng, torus, rng.randint(1, 3), nterms=1)
        Q2 = random_good(rng, torus, rng.randint(1, 3), nterms=1)
        assert is_good(n2_apply(pair, Q1, Q2), torus)


def test_exp_n_outputs_are_good_on_t3(t3):
    from sflab.linfty import morphism_apply
    pair = change_of_splitting(t3, setup_named("t3g1"))
    basis = MultivectorBasis(3, 3)
    rng = random.Random(16)
    words = []
    for L in (1, 2, 3):
        for _ in range(2):
            w = word_of(basis, [random_good(rng, t3, rng.randint(0, 3), nterms=1) for _ in range(L)])
            if not w.is_zero():
                words.append(w)
    rep = exp_N_and_intertwine(pair, words)
    assert rep.ok
    for w in words:
        image = morphism_apply(rep.morphism, w)
        for word in image.terms:
            for key in word:
                assert is_good(basis.element(key), t3)
