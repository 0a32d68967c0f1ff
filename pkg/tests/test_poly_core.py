from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from kreinpoly.errors import PreconditionError
from kreinpoly.exact import ExactValue, SQRT_PI, rational_of
from kreinpoly.oracle import oracle_functional
from kreinpoly.polys import (
    DEGREE_CAP,
    FamilySpec,
    MonomialPoly,
    assemble,
    basis_coefficients,
    hermite_from_laguerre,
    hermite_to_laguerre,
    jacobi_param_shift,
    monomial_inversion,
    norm_h,
    poly_coeffs,
)

params = st.fractions(min_value=Fraction(-1, 2), max_value=4, max_denominator=4)
degrees = st.integers(0, 9)
points = st.fractions(-3, 3, max_denominator=7)


def exact(r) -> Fraction:
    return Fraction(str(sympy.simplify(r)))


def families():
    return [FamilySpec.laguerre(0), FamilySpec.laguerre(Fraction(3, 2)), FamilySpec.hermite(),
            FamilySpec.jacobi(0, 0), FamilySpec.jacobi(1, Fraction(1, 2)), FamilySpec.jacobi(Fraction(-1, 2), 2)]


def test_low_degree_coefficients():
    assert poly_coeffs(FamilySpec.hermite(), 3).coeffs == (0, -12, 0, 8)
    assert poly_coeffs(FamilySpec.laguerre(0), 2).coeffs == (1, -2, Fraction(1, 2))
    assert poly_coeffs(FamilySpec.jacobi(0, 0), 2).coeffs == (Fraction(-1, 2), 0, Fraction(3, 2))


def test_parameter_validation():
    with pytest.raises(PreconditionError):
        FamilySpec.laguerre(-1)
    with pytest.raises(PreconditionError):
        FamilySpec("hermite", 1, 0)
    with pytest.raises(PreconditionError):
        poly_coeffs(FamilySpec.hermite(), DEGREE_CAP + 1)


def test_float_parameters_go_through_repr():
    assert FamilySpec.laguerre(0.3).alpha == Fraction(3, 10)


@settings(max_examples=60)
@given(params, degrees, points)
def test_laguerre_matches_sympy(a, n, x):
    v = poly_coeffs(FamilySpec.laguerre(a), n)(x)
    assert v == exact(sympy.assoc_laguerre(n, sympy.Rational(a), sympy.Rational(x)))


@settings(max_examples=60)
@given(params, params, degrees, st.fractions(-1, 1, max_denominator=9))
def test_jacobi_matches_sympy(a, g, n, x):
    v = poly_coeffs(FamilySpec.jacobi(a, g), n)(x)
    assert v == exact(sympy.jacobi(n, sympy.Rational(a), sympy.Rational(g), sympy.Rational(x)))


@given(degrees, points)
def test_hermite_matches_sympy(n, x):
    v = poly_coeffs(FamilySpec.hermite(), n)(x)
    assert v == exact(sympy.hermite(n, sympy.Rational(x)))


@pytest.mark.parametrize("fam", families(), ids=str)
def test_norms_agree_with_expansion_oracle(fam):
    for n in range(6):
        assert oracle_functional(fam, (n, n)).value == norm_h(fam, n)


def test_norm_examples():
    assert norm_h(FamilySpec.hermite(), 2) == SQRT_PI * 8
    assert norm_h(FamilySpec.jacobi(0, 0), 1) == ExactValue(Fraction(2, 3))
    assert norm_h(FamilySpec.laguerre(4), 0) == ExactValue(24)


@given(st.integers(0, 14))
def test_hermite_laguerre_reduction(m):
    assert hermite_from_laguerre(hermite_to_laguerre(m)) == poly_coeffs(FamilySpec.hermite(), m)


@pytest.mark.parametrize("fam", families(), ids=str)
def test_monomial_inversion_matches_elimination(fam):
    for s in range(8):
        closed = [rational_of(c) for c in monomial_inversion(s, fam)]
        assert closed == basis_coefficients(MonomialPoly.monomial(s), fam)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 6), params, params, st.sampled_from([Fraction(1), Fraction(2), Fraction(3), Fraction(3, 2)]))
def test_parameter_shift_two_formulas(k, a, g, beta):
    if a * beta <= -1 or g * beta <= -1:
        return
    target = FamilySpec.jacobi(a * beta, g * beta)
    want = basis_coefficients(poly_coeffs(FamilySpec.jacobi(a, g), k), target)
    for formula in ("connection", "pexp"):
        got = [rational_of(c) for c in jacobi_param_shift(k, a, g, beta, formula)]
        assert got == want, formula


@given(st.lists(st.fractions(-5, 5, max_denominator=5), max_size=6),
       st.lists(st.fractions(-5, 5, max_denominator=5), max_size=6), points)
def test_monomial_poly_ring(p, q, x):
    P, Q = MonomialPoly(p), MonomialPoly(q)
    assert (P * Q)(x) == P(x) * Q(x)
    assert (P + Q)(x) == P(x) + Q(x)
    assert (P - P).coeffs == ()
    assert MonomialPoly.from_json(P.to_json()) == P


@pytest.mark.parametrize("fam", families(), ids=str)
def test_assemble_inverts_elimination(fam):
    target = MonomialPoly([3, 0, Fraction(-1, 2), 5, 1])
    assert assemble(basis_coefficients(target, fam), fam) == target
