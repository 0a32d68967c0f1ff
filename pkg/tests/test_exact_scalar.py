import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from kreinpoly.errors import MixedRadicalError, PoleError
from kreinpoly.exact import (
    ApproxValue,
    ExactValue,
    SQRT_PI,
    format_scalar,
    gamma_float,
    gamma_lattice,
    gamma_ratio,
    gen_binomial,
    half_lattice,
    harmonic_general,
    parse_scalar,
    pochhammer,
    rational_power,
)

fractions = st.fractions(min_value=-50, max_value=50, max_denominator=30)
radicands = st.sampled_from([1, 2, 3, 5, 6])
pi_powers = st.integers(-3, 3)
exact_values = st.builds(ExactValue, fractions, radicands, pi_powers)


def test_gamma_half_integers():
    assert gamma_lattice(Fraction(1, 2)) == SQRT_PI
    assert gamma_lattice(Fraction(5, 2)) == ExactValue(Fraction(3, 4), 1, 1)
    assert gamma_lattice(Fraction(-1, 2)) == ExactValue(-2, 1, 1)
    assert gamma_lattice(6) == ExactValue(120)


def test_gamma_pole():
    with pytest.raises(PoleError):
        gamma_lattice(-2)


def test_gamma_off_lattice_is_float_with_budget():
    g = gamma_lattice(Fraction(1, 3))
    assert isinstance(g, ApproxValue)
    assert math.isclose(g.value, math.gamma(1 / 3), rel_tol=1e-14)
    assert g.rel < 1e-13


def test_pochhammer_and_binomial():
    assert pochhammer(Fraction(1, 2), 3) == ExactValue(Fraction(15, 8))
    assert pochhammer(-3, 4) == ExactValue(0)
    assert gen_binomial(Fraction(1, 2), 2) == ExactValue(Fraction(-1, 8))
    assert gen_binomial(7, 3) == ExactValue(35)


def test_gamma_ratio_integer_difference():
    assert gamma_ratio(Fraction(7, 2), Fraction(3, 2)) == ExactValue(Fraction(15, 4))
    assert gamma_ratio(Fraction(1, 3), Fraction(4, 3)) == ExactValue(3)


def test_half_lattice():
    assert half_lattice(Fraction(7, 2)) == Fraction(7, 2)
    assert half_lattice(Fraction(1, 3)) is None


def test_rational_power():
    assert rational_power(3, Fraction(-5, 2)) == ExactValue(Fraction(1, 27), 3)
    assert rational_power(4, Fraction(1, 2)) == ExactValue(2)
    assert isinstance(rational_power(2, Fraction(1, 3)), ApproxValue)


def test_harmonic():
    assert harmonic_general(4) == ExactValue(Fraction(25, 12))
    h = harmonic_general(Fraction(1, 2))
    assert math.isclose(float(h), 2 - 2 * math.log(2), rel_tol=1e-13)


def test_mixed_radicals_refuse_addition():
    with pytest.raises(MixedRadicalError):
        ExactValue(1, 2) + ExactValue(1, 3)


def test_formatting_examples():
    assert format_scalar(SQRT_PI) == "sqrt(pi)"
    assert format_scalar(ExactValue(Fraction(9, 32), 1, 2)) == "9/32*pi"
    assert format_scalar(ExactValue(Fraction(-21, 8), 2, 1)) == "-21/8*sqrt(2)*sqrt(pi)"


@given(exact_values)
def test_format_round_trip(v):
    assert parse_scalar(format_scalar(v)) == v


@given(exact_values, exact_values)
def test_multiplication_commutes_and_divides_back(x, y):
    assert x * y == y * x
    if y:
        assert (x * y) / y == x


@given(fractions, fractions, radicands, pi_powers)
def test_same_tag_addition_is_linear(p, q, rad, e):
    assert ExactValue(p, rad, e) + ExactValue(q, rad, e) == ExactValue(p + q, rad, e)


@given(exact_values)
def test_float_conversion_matches_components(v):
    expected = float(v.q) * math.sqrt(v.tag[0]) * math.sqrt(math.pi) ** v.tag[1]
    assert math.isclose(float(v), expected, rel_tol=1e-12, abs_tol=1e-300)


@given(st.floats(0.05, 30))
def test_gamma_float_error_budget_covers_math_gamma(x):
    g = gamma_float(x)
    assert abs(g.value - math.gamma(x)) <= g.abserr + 4e-16 * abs(g.value)


def test_approx_arithmetic_propagates_error():
    a = ApproxValue(1.0, 1e-10)
    b = ApproxValue(2.0, 2e-10)
    assert (a + b).abserr >= 3e-10
    assert (a * b).abserr >= 4e-10
    assert a.agrees_with(ApproxValue(1.0 + 5e-11))
