"""Linearization and connection coefficients.

Two kinds of expansion feed the second-order-equation and algebraic routes:

* ``xs_expand``: ``x^s p_m`` written back in a polynomial basis;
* ``product_linearize``: ``p_m p_n`` written back in the family's basis.

Every coefficient here is rational for rational parameters, so the tables are
kept as Fractions and memoized.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import PreconditionError
from .exact import gamma_ratio, pochhammer
from .hyper import hyp2f1_terminating, hyp3f2_terminating
from .polys import FamilySpec, MonomialPoly, as_param, assemble, jacobi_param_shift

F0 = Fraction(0)


def _fr(x) -> Fraction:
    return x.as_fraction()


def _gr(a, b) -> Fraction:
    """``Gamma(a)/Gamma(b)`` for an integer difference, as a Fraction."""
    return _fr(gamma_ratio(a, b))


def _rgamma_int(n) -> Fraction:
    """``1/Gamma(n)`` for an integer n (zero at the poles)."""
    return F0 if n <= 0 else Fraction(1, math.factorial(n - 1))


def _poch(a, n: int) -> Fraction:
    return _fr(pochhammer(a, n))


def _poch_any(a, n: int) -> Fraction:
    """``(a)_n = Gamma(a+n)/Gamma(a)``, also for negative n."""
    return _fr(pochhammer(a, n)) if n >= 0 else _gr(a + n, a)


@dataclass(frozen=True)
class ExpansionCoeffs:
    """``sum_k coeffs[k] * q_k`` with ``q_k`` the degree-k polynomial of ``basis``."""

    basis: FamilySpec
    coeffs: tuple

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else F0

    def __len__(self):
        return len(self.coeffs)

    def nonzero(self):
        return [(k, c) for k, c in enumerate(self.coeffs) if c]

    def to_monomial(self) -> MonomialPoly:
        return assemble(self.coeffs, self.basis)


# ---------------------------------------------------------------------------
# x^s p_m
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def laguerre_xs_coeff(m: int, g: int, j: int, a: Fraction) -> Fraction:
    """Coefficient of ``L_j^(a)`` in ``x^g L_m^(a)``."""
    acc = F0
    for l in range(max(0, j - g), min(j, m) + 1):
        acc += (
            math.comb(j, l)
            * _gr(l + a + g + 1, j + a + 1)
            * _rgamma_int(l - m + g + 1)
            / (math.factorial(m - l) * math.factorial(g - j + l))
        )
    return (-1) ** (j + m) * math.factorial(g) ** 2 * acc


@lru_cache(maxsize=None)
def hermite_xs_coeff(m: int, s: int, j: int) -> Fraction:
    """Coefficient of ``H_{m+s-2j}`` in ``x^s H_m``."""
    top = m + s - 2 * j
    acc = F0
    for k in range(max(0, m - j), min(top, m) + 1):
        acc += Fraction(
            math.comb(top, k),
            2 ** k * math.factorial(m - k) * math.factorial(k + j - m),
        )
    return Fraction(2 ** m * math.factorial(m) * math.factorial(s),
                    2 ** s * math.factorial(top)) * acc


@lru_cache(maxsize=None)
def jacobi_xs_coeff(k: int, s: int, i: int, lam: Fraction, dlt: Fraction) -> Fraction:
    """Coefficient of ``P_i^(lam,dlt)`` in ``x^s P_k^(lam,dlt)``."""
    sl = lam + dlt
    acc = F0
    for r in range(max(0, i - s), min(i, k) + 1):
        inner = F0
        for l in range(k - r + 1):
            f = _fr(hyp2f1_terminating(i - s - r, i + dlt + l + 1, 2 * i + k - r + sl + 2, 2))
            if not f:
                continue
            inner += (
                (-1) ** l
                * _gr(i + k - r + lam - l + 1, k + lam - l + 1)
                * _gr(i + dlt + l + 1, r + dlt + l + 1)
                / (math.factorial(l) * math.factorial(k - r - l))
                * f
            )
        if inner:
            # (2i+sl+1) Gamma(i+sl+1) / Gamma(2i+k-r+sl+2), pole-free at sl = -1
            if i == 0:
                edge = _gr(sl + 2, k - r + sl + 2)
            else:
                edge = (2 * i + sl + 1) * _gr(i + sl + 1, 2 * i + k - r + sl + 2)
            acc += (
                math.comb(i, r)
                * _poch(k + sl + 1, r)
                * edge
                / (2 ** r * math.factorial(s - i + r))
                * inner
            )
    return (
        (-1) ** (k + s - i) * 2 ** i * math.factorial(s)
        * _gr(k + lam + 1, i + lam + 1)
        * _gr(k + dlt + 1, i + dlt + 1)
        * acc
    )


def _int_power(s, what: str) -> int:
    s = as_param(s)
    if s.denominator != 1 or s < 0:
        raise PreconditionError(f"{what} must be a nonnegative integer")
    return int(s)


def xs_expand(family: FamilySpec, m: int, s) -> ExpansionCoeffs:
    """``x^s p_m`` in the family's own basis (coefficient list by degree).

    For Laguerre ``s`` is the integer exponent applied at the same alpha.
    """
    s = _int_power(s, "power s")
    if family.kind == "laguerre":
        a = family.alpha
        return ExpansionCoeffs(family, tuple(laguerre_xs_coeff(m, s, j, a) for j in range(m + s + 1)))
    if family.kind == "hermite":
        out = [F0] * (m + s + 1)
        for j in range((m + s) // 2 + 1):
            out[m + s - 2 * j] = hermite_xs_coeff(m, s, j)
        return ExpansionCoeffs(family, tuple(out))
    a, g = family.alpha, family.gamma
    return ExpansionCoeffs(family, tuple(jacobi_xs_coeff(m, s, i, a, g) for i in range(m + s + 1)))


# ---------------------------------------------------------------------------
# p_m p_n
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def laguerre_product_coeff(j: int, n: int, k: int, a: Fraction) -> Fraction:
    """Coefficient of ``L_k^(a)`` in ``L_j^(a) L_n^(a)`` (double-sum form)."""
    a = Fraction(a)
    # integer arithmetic over the common denominator d^top
    d, top = a.denominator, min(j, n)
    p = (k + 1) * d + a.numerator
    rise = [d ** top]
    for r in range(top):
        rise.append(rise[-1] // d * (p + r * d))
    comb, perm = math.comb, math.perm
    acc = 0
    for i in range(max(0, k - n), min(k, j) + 1):
        inner = 0
        # (k-j+r+1)_(j-i-r) and (k-n+r+1)_(n+i-k-r) vanish unless r >= j-k, n-k
        for r in range(max(0, j - k, n - k), min(j - i, n + i - k) + 1):
            inner += (
                comb(j - i, r) * comb(n + i - k, r) * math.factorial(r)
                * perm(k - i, j - i - r) * perm(i, n + i - k - r) * rise[r]
            )
        acc += comb(j, i) * comb(n, k - i) * inner
    return Fraction((-1) ** (j + n + k) * math.factorial(k) * acc,
                    math.factorial(j) * math.factorial(n) * d ** top)


@lru_cache(maxsize=None)
def laguerre_product_bracket(n: int, m: int, k: int, a: Fraction) -> Fraction:
    """Coefficient of ``L_k^(a)`` in ``L_n^(a) L_m^(a)`` (terminating-sum form)."""
    if k < abs(n - m) or k > n + m:
        return F0
    d = k - m - n
    acc = F0
    for j in range(max(0, n - k, m - k), (m + n - k + 1) // 2 + 1):
        acc += (
            _poch(Fraction(d, 2), j) * _poch(Fraction(d + 1, 2), j) * _poch(a + k + 1, j)
            / (math.factorial(j) * math.factorial(k - n + j) * math.factorial(k - m + j))
        )
    return (
        Fraction((-2) ** (n + m) * (-1) ** k * math.factorial(k),
                 2 ** k * math.factorial(m + n - k))
        * acc
    )


@lru_cache(maxsize=None)
def jacobi_product_coeff(n: int, m: int, k: int, a: Fraction, g: Fraction) -> Fraction:
    """Coefficient of ``P_k^(a,g)`` in ``P_n^(a,g) P_m^(a,g)``."""
    if k < abs(n - m) or k > n + m:
        return F0
    ag = a + g
    acc = F0
    for t in range(max(0, k - m), min(k, n) + 1):
        inner = F0
        for w in range(m + t - k + 1):
            f = _fr(hyp3f2_terminating(t - n, ag + n + t + 1, a + k + w + 1,
                                       a + t + 1, ag + 2 * k + w + 2, 1))
            if not f:
                continue
            inner += (
                math.comb(m + t - k, w) * (-1) ** w
                * _poch_any(ag + 2 * m + 1, k + w - m - t)
                * _poch(a + k + 1, w)
                / (_poch_any(a + m + 1, k + w - m - t) * _poch(ag + 2 * k + 2, w))
                * f
            )
        if inner:
            acc += (
                math.comb(n, t) * math.comb(m, k - t)
                * _poch(a + t + 1, n - t) / _poch(ag + n + t + 1, n - t)
                * inner
            )
    pre = (
        Fraction(math.factorial(k), math.factorial(n) * math.factorial(m))
        * _gr(ag + k + 1, ag + 2 * k + 1)
        * _gr(ag + 2 * n + 1, ag + n + 1)
        * _gr(ag + 2 * m + 1, ag + m + 1)
    )
    return pre * acc


def hermite_product_coeff(m: int, n: int, k: int) -> Fraction:
    """Coefficient of ``H_{m+n-2k}`` in ``H_m H_n``."""
    return Fraction(math.comb(m, k) * math.comb(n, k) * 2 ** k * math.factorial(k))


def product_linearize(family: FamilySpec, m: int, n: int, form: str = "default") -> ExpansionCoeffs:
    """``p_m p_n`` in the family's basis.

    Laguerre supports ``form="double_sum"`` and ``form="bracket"`` (the
    default); the two are independent expressions for the same numbers.
    """
    size = m + n + 1
    if family.kind == "hermite":
        out = [F0] * size
        for k in range(min(m, n) + 1):
            out[m + n - 2 * k] = hermite_product_coeff(m, n, k)
        return ExpansionCoeffs(family, tuple(out))
    if family.kind == "laguerre":
        a = family.alpha
        if form == "double_sum":
            return ExpansionCoeffs(family, tuple(laguerre_product_coeff(m, n, k, a) for k in range(size)))
        if form not in ("default", "bracket"):
            raise ValueError(f"unknown form {form!r}")
        return ExpansionCoeffs(family, tuple(laguerre_product_bracket(m, n, k, a) for k in range(size)))
    a, g = family.alpha, family.gamma
    return ExpansionCoeffs(family, tuple(jacobi_product_coeff(m, n, k, a, g) for k in range(size)))


def jacobi_shift_pair(family: FamilySpec, m: int, n: int, beta, formula: str = "pexp"):
    """Shift coefficients of ``P_m`` and ``P_n`` into the ``(alpha*beta, gamma*beta)`` basis.

    Returns ``(target_family, coeffs_m, coeffs_n)``.
    """
    if family.kind != "jacobi":
        raise PreconditionError("parameter shift applies to the Jacobi family only")
    b = as_param(beta)
    target = FamilySpec.jacobi(family.alpha * b, family.gamma * b)
    cm = ExpansionCoeffs(target, tuple(_fr(c) for c in jacobi_param_shift(m, family.alpha, family.gamma, b, formula)))
    cn = ExpansionCoeffs(target, tuple(_fr(c) for c in jacobi_param_shift(n, family.alpha, family.gamma, b, formula)))
    return target, cm, cn
