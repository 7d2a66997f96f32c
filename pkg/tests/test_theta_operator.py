from fractions import Fraction
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pfaffian_mirror import (
    INFINITY,
    Series,
    ThetaOperator,
    closed_form_period,
    fit_operator,
    get_family,
    indicial_exponents,
    recurrence_solve,
    riemann_scheme,
)
from pfaffian_mirror.theta_operator import AmbiguousFitError, OperatorError, ResonanceError

from helpers import quintic, quintic_period


def test_quintic_annihilates_its_period():
    assert quintic().apply(quintic_period(20)).is_zero()
    assert recurrence_solve(quintic(), 1, 20) == quintic_period(20)


def test_fit_recovers_quintic():
    assert fit_operator(quintic_period(25), 4, 1) == quintic()


def test_fit_recovers_registry_x9():
    spec = get_family("x9")
    assert fit_operator(closed_form_period(spec, 30), 4, 1) == spec.operator


def test_fit_of_geometric_series():
    # f = sum x^n satisfies (1 - x) Θ f = x f
    L = fit_operator(Series([1] * 21, 20), 1, 1)
    assert L == ThetaOperator([[0, -1], [1, -1]])


def test_fit_none_and_ambiguous():
    with pytest.raises(AmbiguousFitError):
        fit_operator(Series([1] * 31, 30), 2, 1)
    # period of x13 needs phi-degree 4, so an order-4 degree-1 operator does not exist
    assert fit_operator(closed_form_period("x13", 30), 4, 1) is None
    with pytest.raises(OperatorError):
        fit_operator(Series([1] * 5, 4), 4, 4)


def test_canonical_form():
    L = quintic()
    assert L.scaled(-3) == L
    assert L.is_canonical
    assert all(a.denominator == 1 for row in L.coeffs for a in row)


def test_invert_is_an_involution_up_to_gauge():
    L = get_family("x13").operator
    assert L.invert().invert() == L


def test_rescale_inverse_pair():
    L = get_family("x13").operator
    assert L.rescale(7).rescale(Fraction(1, 7)) == L
    assert L.negate().negate() == L


def test_gauge_shift_exponents():
    L = quintic()
    ex = indicial_exponents(L.gauge(Fraction(1, 2)), 0)
    assert sorted(ex.values) == [Fraction(-1, 2)] * 4


def test_transform_chain_matches_steps():
    L = get_family("x13").operator
    steps = ["invert", ("gauge", Fraction(1, 2)), "negate"]
    assert L.transform_chain(steps) == L.invert().gauge(Fraction(1, 2)).negate()
    with pytest.raises(OperatorError):
        L.transform("twist")


def test_x5_recipe_is_self_dual():
    spec = get_family("x5")
    assert spec.operator.transform_chain(spec.transform_steps(spec.golden["self_dual_recipe"])) == spec.operator


@pytest.mark.parametrize("name", ["x13", "x5", "x7", "x10", "x9"])
def test_fuchs_relation(name):
    # for an order-4 Fuchsian operator the exponents sum to 6 (#singular points - 2)
    P = riemann_scheme(get_family(name).operator)
    assert P.fuchs_sum() == 6 * (len(P.points) - 2)


def test_quintic_scheme():
    L = quintic()
    assert sorted(indicial_exponents(L, 0).values) == [0, 0, 0, 0]
    assert sorted(indicial_exponents(L, INFINITY).values) == [Fraction(k, 5) for k in range(1, 5)]
    assert sorted(indicial_exponents(L, Fraction(1, 3125)).values) == [0, 1, 1, 2]


def test_resonance_reported():
    # exponents 0 and 1 at the origin: the power series solution is not unique
    L = ThetaOperator.from_blocks({0: [0, -1, 1], 1: [1]})
    with pytest.raises(ResonanceError):
        recurrence_solve(L, 1, 5)


def test_json_roundtrip():
    L = get_family("x13").operator
    assert ThetaOperator.from_json(L.to_json()) == L
    with pytest.raises(OperatorError):
        ThetaOperator.from_json({"order": 3, "coeffs": L.to_json()["coeffs"]})


def test_zero_operator_rejected():
    with pytest.raises(OperatorError):
        ThetaOperator([[0, 0], [0]])


positive = st.integers(min_value=1, max_value=5)


@given(positive, positive)
def test_first_order_fit_solve_roundtrip(a, b):
    # positive a, b keep every recurrence step nonzero, so the solution is not a polynomial
    L = ThetaOperator.from_blocks({0: [0, 1], 1: [a, b]})
    s = recurrence_solve(L, 1, 25)
    assert fit_operator(s, 1, 1) == L


@given(st.fractions(min_value=-3, max_value=3, max_denominator=4).filter(bool))
def test_rescale_composes(f):
    L = get_family("x9").operator
    assert L.rescale(f).rescale(1 / f) == L
    assert L.gauge(f).gauge(-f) == L
