import math
from fractions import Fraction

import pytest

from kreinpoly.errors import AccuracyError, PreconditionError
from kreinpoly.exact import ApproxValue, ExactValue, SQRT_PI
from kreinpoly.oracle import (
    integrate_monomial_weight,
    oracle_functional,
    product_poly,
    quad_functional,
    quad_weighted,
)
from kreinpoly.polys import FamilySpec, poly_coeffs


def test_monomial_integrals():
    assert integrate_monomial_weight(FamilySpec.laguerre(0), 3, 1) == ExactValue(6)
    assert integrate_monomial_weight(FamilySpec.hermite(), 2, 1) == SQRT_PI / 2
    # int (1-x)(1+x) dx = 4/3
    assert integrate_monomial_weight(FamilySpec.jacobi(1, 1), 0, 1) == ExactValue(Fraction(4, 3))


def test_product_poly_is_order_free():
    fam = FamilySpec.jacobi(1, 2)
    assert product_poly(fam, (3, 1, 2)) == poly_coeffs(fam, 1) * poly_coeffs(fam, 2) * poly_coeffs(fam, 3)


def test_expansion_oracle_is_exact_on_lattice():
    r = oracle_functional(FamilySpec.laguerre(4), (7, 15), 2, 3)
    assert r.method == "exact_expansion" and r.error == 0.0
    assert r.value == ExactValue(Fraction(10908801561641984000, 68630377364883))


def test_expansion_oracle_off_lattice_carries_error():
    r = oracle_functional(FamilySpec.laguerre(Fraction(1, 3)), (1, 1), 0, 1)
    assert isinstance(r.value, ApproxValue) and r.error > 0


@pytest.mark.parametrize("fam,degrees,s,beta", [
    (FamilySpec.laguerre(4), (7, 15), 2, 3),
    (FamilySpec.hermite(), (3, 5), 2, 2),
    (FamilySpec.jacobi(Fraction(1, 2), 2), (2, 4), 1, Fraction(3, 2)),
    (FamilySpec.jacobi(Fraction(-1, 2), Fraction(-1, 2)), (3, 3), 0, 1),
])
def test_quadrature_matches_expansion(fam, degrees, s, beta):
    exact = oracle_functional(fam, degrees, s, beta).value
    q = quad_functional(fam, degrees, s, beta, tol=1e-10)
    assert q.method == "quadrature"
    assert abs(q.value.value - float(exact)) <= q.error + 1e-12 * abs(float(exact))


def test_quadrature_absolute_power_kernel():
    q = quad_functional(FamilySpec.hermite(), (0, 0), Fraction(1, 2), 1, abs_power=True)
    assert math.isclose(q.value.value, math.gamma(0.75), rel_tol=1e-10)


def test_quadrature_reports_failure_with_best_estimate():
    with pytest.raises(AccuracyError) as info:
        quad_weighted(FamilySpec.laguerre(0), (30, 30), lambda x: x ** 10, 1, tol=1e-14, max_degree=2)
    assert info.value.best is not None


def test_quadrature_preconditions():
    with pytest.raises(PreconditionError):
        quad_functional(FamilySpec.laguerre(0), (1, 1), -2, 1)
    with pytest.raises(PreconditionError):
        quad_functional(FamilySpec.jacobi(0, 0), (1, 1), Fraction(1, 2), 1)
