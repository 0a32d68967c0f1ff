"""Ground truth for the functionals, independent of every closed form.

``oracle_functional`` multiplies the polynomials out in the monomial basis
and integrates term by term against the weight. ``quad_functional`` is a
high-precision tanh-sinh quadrature (mpmath) for parameters off the lattice.
Neither touches the hypergeometric kernels or the linearization formulas.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import mpmath

from .errors import AccuracyError, PreconditionError
from .exact import (
    ApproxValue,
    ExactValue,
    Scalar,
    ZERO,
    gamma_lattice,
    rational_of,
    rational_power,
)
from .polys import FamilySpec, MonomialPoly, as_param, poly_coeffs


@dataclass(frozen=True)
class OracleResult:
    value: Scalar
    method: str  # "exact_expansion" or "quadrature"
    error: float = 0.0


def _weight_exponents(family: FamilySpec, beta: Fraction) -> tuple[Fraction, Fraction]:
    return family.alpha * beta, family.gamma * beta


def monomial_table(family: FamilySpec, s, beta, top: int, abs_power: bool = False):
    """Memoized :func:`_monomial_table`."""
    return _monomial_table(family, as_param(s), as_param(beta), top, abs_power)


@lru_cache(maxsize=4096)
def _monomial_table(family: FamilySpec, s, beta, top: int, abs_power: bool = False):
    """``(base, ratios)`` with ``int w^beta x^(s+u) dx = base * ratios[u]`` for u <= top.

    ``ratios`` are exact Fractions; only ``base`` can carry Gamma factors,
    radicals or floats. With ``abs_power`` the kernel is ``|x|^s x^u``
    (Hermite only, where it allows non-integer s).
    """
    beta = as_param(beta)
    s = as_param(s)
    if beta <= 0:
        raise PreconditionError("beta must be positive")
    if family.kind == "laguerre":
        c = family.alpha * beta + s + 1
        if c <= 0:
            raise PreconditionError("divergent integral: need alpha*beta + s > -1")
        base = gamma_lattice(c) * rational_power(beta, -c)
        ratios = [Fraction(1)]
        for u in range(top):
            ratios.append(ratios[-1] * (c + u) / beta)
        return base, tuple(ratios)
    if family.kind == "hermite":
        if abs_power:
            if s <= -1:
                raise PreconditionError("divergent integral: need s > -1")
            c = (s + 1) / 2
            base = gamma_lattice(c) * rational_power(beta, -c)
            ratios = []
            for u in range(top + 1):
                if u % 2:
                    ratios.append(Fraction(0))
                else:
                    p = u // 2
                    r = Fraction(1)
                    for i in range(p):
                        r *= (c + i) / beta
                    ratios.append(r)
            return base, tuple(ratios)
        if s.denominator != 1 or s < 0:
            raise PreconditionError("Hermite power s must be a nonnegative integer")
        si = int(s)
        base = gamma_lattice(Fraction(1, 2)) * rational_power(beta, Fraction(-1, 2))
        ratios = []
        for u in range(top + 1):
            t = u + si
            if t % 2:
                ratios.append(Fraction(0))
            else:
                r = Fraction(1)
                for i in range(t // 2):
                    r *= (Fraction(1, 2) + i) / beta
                ratios.append(r)
        return base, tuple(ratios)
    # Jacobi
    if s.denominator != 1 or s < 0:
        raise PreconditionError("Jacobi power s must be a nonnegative integer")
    si = int(s)
    a, g = _weight_exponents(family, beta)
    if a <= -1 or g <= -1:
        raise PreconditionError("divergent integral: need alpha*beta, gamma*beta > -1")
    base = (
        rational_power(2, a + g + 1)
        * gamma_lattice(a + 1)
        * gamma_lattice(g + 1)
        / gamma_lattice(a + g + 2)
    )
    # x = (1+x) - 1; int (1-x)^a (1+x)^(g+i) = base * 2^i (g+1)_i / (a+g+2)_i
    beta_ratio = [Fraction(1)]
    for i in range(top + si):
        beta_ratio.append(beta_ratio[-1] * 2 * (g + 1 + i) / (a + g + 2 + i))
    ratios = []
    for u in range(top + 1):
        t = u + si
        ratios.append(sum(
            (math.comb(t, i) * (-1) ** (t - i) * beta_ratio[i] for i in range(t + 1)),
            Fraction(0),
        ))
    return base, tuple(ratios)


def integrate_monomial_weight(family: FamilySpec, t, beta) -> Scalar:
    """``int x^t w(x)^beta dx`` over the family's interval, in closed form."""
    base, ratios = monomial_table(family, t, beta, 0)
    return base * ratios[0]


def integrate_poly(poly: MonomialPoly, family: FamilySpec, s, beta, abs_power: bool = False) -> Scalar:
    """Termwise ``int x^s poly(x) w^beta dx``; exact for lattice parameters."""
    if not poly.coeffs:
        return ZERO
    base, ratios = monomial_table(family, s, beta, poly.degree, abs_power)
    acc = sum((c * r for c, r in zip(poly.coeffs, ratios)), Fraction(0))
    if acc == 0:
        return ZERO
    return base * acc


def product_poly(family: FamilySpec, degrees: Sequence[int]) -> MonomialPoly:
    return _product_poly(family, tuple(sorted(degrees)))


@lru_cache(maxsize=4096)
def _product_poly(family: FamilySpec, degrees: tuple) -> MonomialPoly:
    out = MonomialPoly([1])
    for m in degrees:
        out = out * poly_coeffs(family, m)
    return out


def oracle_functional(family: FamilySpec, degrees: Sequence[int], s=0, beta=1,
                      abs_power: bool = False) -> OracleResult:
    """Exact-expansion value of ``int w^beta x^s prod p_mi dx``."""
    value = integrate_poly(product_poly(family, degrees), family, s, beta, abs_power)
    err = value.abserr if isinstance(value, ApproxValue) else 0.0
    return OracleResult(value, "exact_expansion", err)


# ---------------------------------------------------------------------------
# quadrature
# ---------------------------------------------------------------------------

def _mp(x):
    r = rational_of(x)
    if r is not None:
        return mpmath.mpf(r.numerator) / r.denominator
    return mpmath.mpf(float(x))


def _poly_value(family: FamilySpec, n: int, x, a, g):
    """``p_n(x)`` by the three-term recurrence at the working precision."""
    if family.kind == "hermite":
        p0, p1 = mpmath.mpf(1), 2 * x
        if n == 0:
            return p0
        for k in range(1, n):
            p0, p1 = p1, 2 * x * p1 - 2 * k * p0
        return p1
    if family.kind == "laguerre":
        p0, p1 = mpmath.mpf(1), 1 + a - x
        if n == 0:
            return p0
        for k in range(1, n):
            p0, p1 = p1, ((2 * k + 1 + a - x) * p1 - (k + a) * p0) / (k + 1)
        return p1
    p0 = mpmath.mpf(1)
    p1 = (a + 1) + (a + g + 2) * (x - 1) / 2
    if n == 0:
        return p0
    for k in range(1, n):
        c = 2 * k + a + g
        a1 = 2 * (k + 1) * (k + a + g + 1) * c
        a2 = (c + 1) * (a * a - g * g)
        a3 = c * (c + 1) * (c + 2)
        a4 = 2 * (k + a) * (k + g) * (c + 2)
        p0, p1 = p1, ((a2 + a3 * x) * p1 - a4 * p0) / a1
    return p1


def _breakpoints(family: FamilySpec, deg: int, lead: float, rate: float):
    """Panel ends covering the oscillatory part of the integrand."""
    if family.kind == "laguerre":
        reach = (max(lead, 0.0) + 4 * deg + 60) / rate
        return [0] + [reach * k / 8 for k in range(1, 9)] + [mpmath.inf]
    if family.kind == "hermite":
        reach = math.sqrt((2 * deg + max(lead, 0.0) + 60) / rate)
        return [-mpmath.inf] + [reach * k / 6 for k in range(-6, 7)] + [mpmath.inf]
    return [-1, -0.5, 0, 0.5, 1]


def quad_weighted(family: FamilySpec, degrees: Sequence[int], kernel, beta=1,
                  tol: float = 1e-10, dps: int = 20, max_degree: int = 10,
                  lead: float = 0.0, rate: float = 0.0) -> OracleResult:
    """Tanh-sinh quadrature of ``int kernel(x) w(x)^beta prod p_mi(x) dx``.

    ``kernel`` receives an mpmath number at ``dps`` digits. ``lead`` (extra
    power of x) and ``rate`` (extra exponential decay) only shape the panel
    layout. Endpoint singularities are left to the double-exponential
    change of variables, which clusters nodes at the ends. Raises
    ``AccuracyError`` with the best estimate when the estimated error exceeds
    ``tol`` relative (plus a small absolute floor for vanishing integrals).
    """
    b = as_param(beta)
    if b <= 0:
        raise PreconditionError("beta must be positive")
    with mpmath.workdps(dps):
        a, g, bm = _mp(family.alpha), _mp(family.gamma), _mp(b)
        if family.kind == "laguerre":
            def weight(x):
                return x ** (a * bm) * mpmath.exp(-bm * x)
        elif family.kind == "hermite":
            def weight(x):
                return mpmath.exp(-bm * x * x)
        else:
            def weight(x):
                return (1 - x) ** (a * bm) * (1 + x) ** (g * bm)

        def f(x):
            v = kernel(x) * weight(x)
            for m in degrees:
                v *= _poly_value(family, m, x, a, g)
            return v

        pts = _breakpoints(family, sum(degrees), lead, float(b) + rate)
        value, err = mpmath.quad(f, pts, error=True, maxdegree=max_degree)
        value = float(value)
        err = float(err) + 4 * 2.0 ** -53 * abs(value)
    out = ApproxValue(value, err)
    if err > tol * abs(value) + 1e-3 * tol:
        raise AccuracyError(f"quadrature error {err:.3e} exceeds tolerance {tol:.1e}", out)
    return OracleResult(out, "quadrature", err)


def quad_functional(family: FamilySpec, degrees: Sequence[int], s=0, beta=1,
                    tol: float = 1e-10, abs_power: bool = False, dps: int = 20,
                    max_degree: int = 10) -> OracleResult:
    """Quadrature value of ``int w^beta x^s prod p_mi dx`` (``|x|^s`` with ``abs_power``)."""
    b, sp = as_param(beta), as_param(s)
    if family.kind == "laguerre":
        if family.alpha * b + sp <= -1:
            raise PreconditionError("divergent integral: need alpha*beta + s > -1")
    elif not abs_power and (sp.denominator != 1 or sp < 0):
        raise PreconditionError(f"{family.kind} power s must be a nonnegative integer")
    if family.kind == "jacobi" and (family.alpha * b <= -1 or family.gamma * b <= -1):
        raise PreconditionError("divergent integral: need alpha*beta, gamma*beta > -1")
    if family.kind == "laguerre" or abs_power:
        with mpmath.workdps(dps):
            e = _mp(sp)

        def kernel(x):
            return abs(x) ** e if x else mpmath.mpf(0) ** e
    else:
        e = int(sp)

        def kernel(x):
            return x ** e

    return quad_weighted(family, degrees, kernel, b, tol, dps, max_degree,
                         lead=float(family.alpha * b + sp))
