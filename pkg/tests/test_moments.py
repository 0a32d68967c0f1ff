import math
from fractions import Fraction

import mpmath
import pytest

from kreinpoly.errors import PreconditionError
from kreinpoly.exact import EULER_GAMMA, ApproxValue, ExactValue
from kreinpoly.moments import (
    MomentRequest,
    central_difference,
    exp_functional,
    exp_functional_report,
    krein_moment,
    log_moment,
    moment,
    power_moment,
    richardson_derivative,
    weight_log_functional,
)
from kreinpoly.oracle import quad_weighted
from kreinpoly.polys import FamilySpec, norm_h

LAG0 = FamilySpec.laguerre(0)
HER = FamilySpec.hermite()
LEG = FamilySpec.jacobi(0, 0)


def test_zeroth_power_moment_is_norm():
    for fam in (FamilySpec.laguerre(Fraction(3, 2)), HER, FamilySpec.jacobi(1, 2)):
        for n in range(5):
            assert power_moment(fam, n, 0) == norm_h(fam, n)


def test_normalized_second_hermite_moment():
    for n in range(6):
        assert power_moment(HER, n, 2, normalized=True) == ExactValue(Fraction(2 * n + 1, 2))


def test_krein_moment_is_weight_power():
    assert krein_moment(HER, 3, 2) == ExactValue(Fraction(112, 27), 3, 1)
    with pytest.raises(PreconditionError):
        krein_moment(HER, 1, -1)


def test_central_difference_of_cubic_is_exact():
    f = lambda x: (mpmath.mpf(x.numerator) / x.denominator) ** 3
    with mpmath.workdps(30):
        assert abs(central_difference(f, Fraction(1), 1, Fraction(1, 10)) - 3 - mpmath.mpf(1) / 400) < 1e-25
        best, err = richardson_derivative(f, Fraction(1), 1)
    assert abs(best - 3) < 1e-20


def test_log_moments():
    v = log_moment(LAG0, 0, 1)
    assert abs(v.value + EULER_GAMMA) < 1e-12
    # int e^{-x^2} log|x| dx = -sqrt(pi) (gamma + 2 log 2) / 2
    h = log_moment(HER, 0, 1)
    assert math.isclose(h.value, -math.sqrt(math.pi) * (EULER_GAMMA + 2 * math.log(2)) / 2, rel_tol=1e-10)
    # int_{-1}^{1} log(|x|)^2 dx = 4
    assert math.isclose(log_moment(LEG, 0, 2).value, 4.0, rel_tol=1e-10)
    assert log_moment(LAG0, 2, 0) == norm_h(LAG0, 2)


def test_log_moment_matches_quadrature():
    fam = FamilySpec.laguerre(Fraction(1, 2))
    v = log_moment(fam, 2, 1, normalized=True)
    q = quad_weighted(fam, (2, 2), lambda x: mpmath.log(x) if x else mpmath.mpf(0)).value
    assert abs(v.value - q.value / float(norm_h(fam, 2))) < 1e-8


def test_exp_functional_series():
    # int x e^{-x/3} x e^{-x} L_1^(1)(x)^2 dx = 189/128
    rep = exp_functional_report(FamilySpec.laguerre(1), 1, 1, Fraction(1, 3))
    assert rep.method == "series"
    assert abs(rep.value.value - 189 / 128) <= rep.value.abserr


def test_exp_functional_closed_form_for_fast_rates():
    fam = FamilySpec.laguerre(1)
    rep = exp_functional_report(fam, 2, 1, 2)
    assert rep.method == "closed_form"
    q = quad_weighted(fam, (2, 2), lambda x: x * mpmath.exp(-2 * x), rate=2).value
    assert abs(rep.value.value - q.value) < 1e-12 * abs(q.value)


def test_exp_functional_zero_rate_is_power_moment():
    v = exp_functional(HER, 2, 2, 0)
    assert isinstance(v, ApproxValue) and math.isclose(v.value, float(power_moment(HER, 2, 2)), rel_tol=1e-15)


def test_weight_log_examples():
    assert abs(weight_log_functional(LAG0, 0, 1).value + 0.25) < 1e-10
    assert abs(weight_log_functional(HER, 0, 0).value + math.sqrt(math.pi) / 2) < 1e-10


def test_weight_log_matches_quadrature():
    fam = FamilySpec.jacobi(1, Fraction(1, 2))
    v = weight_log_functional(fam, 2, Fraction(1, 2))
    kernel = lambda x: mpmath.log((1 - x) * mpmath.sqrt(1 + x))
    q = quad_weighted(fam, (2, 2), kernel, Fraction(3, 2)).value
    assert abs(v.value - q.value) < 1e-8 * abs(q.value)


def test_moment_dispatch():
    assert moment(MomentRequest(LAG0, 3, "power", 1, normalized=True)) == ExactValue(7)
    with pytest.raises(PreconditionError):
        MomentRequest(LAG0, 1, "median")
    with pytest.raises(PreconditionError):
        moment(MomentRequest(LAG0, 1, "log", Fraction(1, 2)))
