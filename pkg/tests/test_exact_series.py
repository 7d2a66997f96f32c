from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from pfaffian_mirror import NumberFieldElement, Series, numberfield_arith, series_arith, series_calculus, series_reversion
from pfaffian_mirror.exact_series import SeriesError
from pfaffian_mirror.numberfield import NumberFieldError

ints = st.integers(min_value=-6, max_value=6)


@st.composite
def series(draw, zero_const=False, order=None):
    n = order if order is not None else draw(st.integers(min_value=1, max_value=10))
    c = draw(st.lists(ints, min_size=n + 1, max_size=n + 1))
    if zero_const:
        c[0] = 0
    return Series(c, n)


def test_difference_of_squares():
    assert series_arith(Series([1, 1], 4), Series([1, -1], 4), "mul") == Series([1, 0, -1], 4)


def test_geometric_series():
    assert series_arith(Series([1], 6), Series([1, -1], 6), "div") == Series([1] * 7, 6)


def test_mixed_orders_take_minimum():
    s = Series([1, 2, 3], 2) + Series([1, 1, 1, 1, 1], 4)
    assert s.order == 2
    assert (Series([1, 2, 3], 2) * Series([1] * 9, 8)).order == 2


def test_division_by_nonunit_fails():
    with pytest.raises(SeriesError):
        Series([1, 1], 3) / Series([0, 1], 3)


def test_calculus_examples():
    s = Series([1, 1], 8)
    assert series_calculus(series_calculus(s, "log"), "exp") == s
    assert series_calculus(Series([1] * 6, 5), "theta") == Series(range(6), 5)
    assert series_calculus(Series([0, 1, 4], 5), "integrate_theta") == Series([0, 1, 2], 5)


@pytest.mark.parametrize("kind, s", [("exp", Series([1, 1], 3)), ("log", Series([2, 1], 3)), ("integrate_theta", Series([1], 3))])
def test_calculus_preconditions(kind, s):
    with pytest.raises(SeriesError):
        series_calculus(s, kind)


def test_reversion_examples():
    assert series_reversion(Series([0, 1], 6)) == Series([0, 1], 6)
    assert list(series_reversion(Series([0, 1, 1], 5)).coeffs) == [0, 1, -1, 2, -5, 14]
    with pytest.raises(SeriesError):
        series_reversion(Series([0, 0, 1], 4))


def test_square_of_x13_period_prefix():
    # first two coefficients of the period are 1 and 20, so the square starts 1 + 40 x
    p = Series([1, 20], 1)
    assert (p * p)[1] == 40


@given(series(), series(), series())
def test_ring_laws(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@given(series(zero_const=True))
def test_exp_log_inverse(s):
    assert s.exp().log() == s
    assert (1 + s).log().exp() == 1 + s


@given(series(zero_const=True))
def test_theta_inverts_integrate(s):
    assert s.integrate_theta().theta() == s


@given(series(zero_const=True))
def test_reversion_roundtrip(s):
    if s[1] == 0:
        s = s + Series.monomial(1, s.order)
    r = s.reversion()
    x = Series.monomial(1, s.order)
    assert s.compose(r) == x
    assert r.compose(s) == x


def test_series_is_exact_and_hashable():
    s = Series([Fraction(1, 3), 2], 3)
    assert s[0] == Fraction(1, 3)
    assert hash(s) == hash(Series([Fraction(1, 3), 2, 0, 0], 3))
    with pytest.raises(IndexError):
        s[10]


# -- number fields ---------------------------------------------------------

QUAD = [-1, 349, 256]  # 256 x^2 + 349 x - 1


def test_reduction_rule():
    a = NumberFieldElement.generator(QUAD)
    sq = a * a
    # a^2 = (1 - 349 a) / 256
    assert sq == NumberFieldElement(QUAD, [Fraction(1, 256), Fraction(-349, 256)])


def test_inverse_and_root():
    a = NumberFieldElement.generator(QUAD)
    assert numberfield_arith(a, numberfield_arith(NumberFieldElement.rational(QUAD, 1), a, "div"), "mul") == NumberFieldElement.rational(QUAD, 1)
    value = a * a * 256 + a * 349 - 1
    assert value.is_zero()


def test_conjugates_are_both_roots():
    a = NumberFieldElement.generator(QUAD)
    b = a.conjugate()
    assert (b * b * 256 + b * 349 - 1).is_zero()
    assert (a + b).is_rational()


def test_field_errors():
    a = NumberFieldElement.generator(QUAD)
    other = NumberFieldElement.generator([1, -544, 256])
    with pytest.raises(NumberFieldError):
        a + other
    with pytest.raises((NumberFieldError, ZeroDivisionError)):
        a / NumberFieldElement.rational(QUAD, 0)
    with pytest.raises(NumberFieldError):
        NumberFieldElement.generator([-1, 0, 1])  # x^2 - 1 is reducible


def test_degree_one_field_is_rational():
    z = NumberFieldElement.rational([-3, 1], Fraction(2, 3))
    assert (z * z).coords[0] == Fraction(4, 9)
