import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from sflab.errors import AxisOutOfRange, DimensionMismatch, DivisionByZero, NonUnitLeadingTerm
from sflab.exactnum import (
    I,
    EpsSeries,
    FieldElement,
    FourierScalar,
    Matrix,
    field_arith,
    fourier_mul,
    fourier_partial,
    root_of_unity,
    series_geometric_inverse,
    set_radical,
)

rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)
elements = st.builds(FieldElement, rationals, rationals, rationals, rationals)
nonzero = elements.filter(bool)


def fourier(dim=2):
    freq = st.tuples(*[st.integers(-2, 2)] * dim)
    return st.dictionaries(freq, elements, max_size=4).map(lambda t: FourierScalar(dim, t))


# field

def test_rational_sum():
    assert FieldElement(Fraction(1, 2)) + FieldElement(Fraction(1, 3)) == FieldElement(Fraction(5, 6))


def test_radical_squares_to_d():
    assert FieldElement.rt() * FieldElement.rt() == FieldElement(2)


def test_inverse_of_one_plus_i():
    x = FieldElement(1, 1)
    assert field_arith(x, None, "inv") == FieldElement(Fraction(1, 2), Fraction(-1, 2))


def test_inverse_of_zero_raises():
    with pytest.raises(DivisionByZero):
        FieldElement(0).inverse()


@given(nonzero)
def test_times_inverse_is_one(x):
    assert x * x.inverse() == FieldElement(1)


@given(elements, elements)
def test_conjugation_is_ring_morphism(x, y):
    assert (x * y).conj() == x.conj() * y.conj()
    assert (x + y).conj() == x.conj() + y.conj()
    assert x.conj().conj() == x


@given(elements, elements, elements)
def test_distributive_and_associative(x, y, z):
    assert x * (y + z) == x * y + x * z
    assert (x * y) * z == x * (y * z)


@pytest.mark.parametrize("d", [3, 5])
def test_other_radicals(d):
    set_radical(d)
    r = FieldElement.rt()
    assert r * r == FieldElement(d)
    x = FieldElement(1, 2, 3, 4)
    assert x * x.inverse() == FieldElement(1)


def test_real_sign_of_quadratic_numbers():
    r = FieldElement.rt()
    assert (r * 7 - 10).real_sign() < 0  # 7 sqrt 2 < 10
    assert (r * 10 - 14).real_sign() > 0  # 10 sqrt 2 > 14
    assert (4 - r * 3).abs_real() == r * 3 - 4  # 3 sqrt 2 > 4
    assert FieldElement(0).real_sign() == 0


@pytest.mark.parametrize("den", [1, 2, 4, 8])
def test_roots_of_unity_have_the_right_order(den):
    for num in range(den):
        z = root_of_unity(num, den)
        assert z * z.conj() == FieldElement(1)
        p = FieldElement(1)
        for _ in range(den):
            p = p * z
        assert p == FieldElement(1)


def test_root_of_unity_outside_field():
    with pytest.raises(ValueError):
        root_of_unity(1, 3)


# Fourier ring

def test_modes_multiply_by_adding_frequencies():
    assert FourierScalar.exp((1, 0)) * FourierScalar.exp((0, 1)) == FourierScalar.exp((1, 1))


def test_cos_squared():
    c = FourierScalar.cos((1,))
    half = FieldElement(Fraction(1, 2))
    expected = FourierScalar.constant(half, 1) + FourierScalar.cos((2,)).scale(half)
    assert fourier_mul(c, c) == expected


def test_times_zero():
    f = FourierScalar.cos((1, 2)) + FourierScalar.constant(3, 2)
    assert (f * FourierScalar.zero(2)).is_zero()


def test_derivative_of_cos_is_minus_sin():
    assert fourier_partial(FourierScalar.cos((1, 0)), 1) == -FourierScalar.sin((1, 0))


def test_derivative_of_single_mode():
    f = FourierScalar.exp((3, -1))
    assert fourier_partial(f, 2) == f.scale(-I)


def test_partial_axis_errors():
    with pytest.raises(AxisOutOfRange):
        fourier_partial(FourierScalar.cos((1, 0)), 3)
    with pytest.raises(AxisOutOfRange):
        fourier_partial(FourierScalar.cos((1, 0)), 0)


def test_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        FourierScalar.cos((1, 0)) * FourierScalar.cos((1, 0, 0))


@settings(max_examples=40)
@given(fourier(), fourier())
def test_leibniz_rule(f, g):
    for j in (1, 2):
        lhs = fourier_partial(fourier_mul(f, g), j)
        rhs = fourier_partial(f, j) * g + f * fourier_partial(g, j)
        assert lhs == rhs


@settings(max_examples=40)
@given(fourier(), fourier(), fourier())
def test_ring_laws(f, g, h):
    assert f * g == g * f
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h


def _real(rng, dim):
    from sflab.foliation.generate import random_real_fourier
    return random_real_fourier(rng, dim, nterms=3, maxfreq=2)


def test_reality_is_preserved():
    rng = random.Random(4)
    for _ in range(30):
        f, g = _real(rng, 3), _real(rng, 3)
        assert f.is_real() and g.is_real()
        assert (f + g).is_real() and (f * g).is_real()
        assert all(f.partial(a).is_real() for a in range(3))


def test_polynomial_axes():
    t = FourierScalar.variable(1, 2, 1)
    f = FourierScalar.cos((1,), dim=2, npoly=1) * t * t
    assert f.poly_degree(1) == 2
    assert f.partial(1) == FourierScalar.cos((1,), dim=2, npoly=1) * t * 2
    assert f.extend(1, 1).dim == 4


def test_evaluate_at_sample_point():
    # cos(theta) at theta = pi/4 is sqrt(2)/2
    v = FourierScalar.cos((1,)).evaluate([root_of_unity(1, 8)])
    assert v == FieldElement(0, 0, Fraction(1, 2))


# eps-series

def _mat(rows):
    return Matrix([[FieldElement(x) for x in r] for r in rows])


def test_inverse_of_identity_series():
    ident = _mat([[1, 0], [0, 1]])
    zero = ident.zero_like()
    inv = series_geometric_inverse(EpsSeries([ident], 4, zero=zero))
    assert inv == EpsSeries([ident], 4, zero=zero)


def test_inverse_with_nilpotent_first_order():
    ident, N = _mat([[1, 0], [0, 1]]), _mat([[0, 1], [0, 0]])
    zero = ident.zero_like()
    inv = series_geometric_inverse(EpsSeries([ident, N], 4, zero=zero))
    assert inv == EpsSeries([ident, -N], 4, zero=zero)


def test_random_inverses_multiply_back():
    rng = random.Random(11)
    ident = _mat([[1, 0], [0, 1]])
    zero = ident.zero_like()
    for _ in range(50):
        coeffs = [ident] + [_mat([[rng.randint(-3, 3) for _ in range(2)] for _ in range(2)])
                            for _ in range(rng.randint(1, 4))]
        A = EpsSeries(coeffs, 4, zero=zero)
        inv = series_geometric_inverse(A)
        assert inv @ A == EpsSeries([ident], 4, zero=zero)
        assert A @ inv == EpsSeries([ident], 4, zero=zero)


def test_single_term_inverse_is_geometric():
    ident, N = _mat([[1, 0], [0, 1]]), _mat([[1, 2], [-1, 3]])
    zero = ident.zero_like()
    inv = series_geometric_inverse(EpsSeries([ident, N], 4, zero=zero))
    power = ident
    for j in range(5):
        assert inv[j] == power
        power = power @ (-N)


def test_non_unit_leading_term():
    zero = _mat([[0, 0], [0, 0]])
    with pytest.raises(NonUnitLeadingTerm):
        series_geometric_inverse(EpsSeries([_mat([[2, 0], [0, 1]])], 2, zero=zero))


def test_series_equality_and_truncation():
    a = EpsSeries([FieldElement(1), FieldElement(2)], 3, zero=FieldElement(0))
    b = EpsSeries([FieldElement(1), FieldElement(2), FieldElement(0)], 3, zero=FieldElement(0))
    assert a == b
    assert (a * a)[2] == FieldElement(4)
    assert (a * a).order == 3
    assert (a - b).is_zero() and (a - b).lowest_order() is None
