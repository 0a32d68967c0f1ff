"""Moments of the density ``rho_n = w * p_n^2``.

Power, Krein, logarithmic, exponential and weight-log functionals. All are
unnormalized by default (the zeroth power moment is the squared norm);
``normalized=True`` divides by it.

Derivatives in s and k are central finite differences refined by Richardson
extrapolation. The sampled functions are evaluated at 40 significant digits
(exact rational series cores, mpmath Gamma prefactors) so that the
differences are limited by truncation, not by rounding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .errors import AccuracyError, PreconditionError
from .exact import (
    EPS,
    ApproxValue,
    ExactValue,
    Scalar,
    gen_binomial,
    harmonic_general,
    pochhammer,
    to_scalar,
)
from .hyper import (
    SrivastavaDaoustSpec,
    TerminatingSeriesSpec,
    lauricella_fa,
    srivastava_daoust,
)
from .krein import FunctionalRequest, evaluate
from .oracle import product_poly
from .polys import FamilySpec, as_param, norm_h, poly_coeffs

DPS = 40
FD_STEP = Fraction(1, 100)
FD_LEVELS = 4
TERM_CAP = 200


def _normalize(value: Scalar, family: FamilySpec, n: int, normalized: bool) -> Scalar:
    return value / norm_h(family, n) if normalized else value


def _backend(value: Scalar, backend: str) -> Scalar:
    if backend == "float" and isinstance(value, ExactValue):
        return ApproxValue.of(value)
    return value


# ---------------------------------------------------------------------------
# power and Krein moments
# ---------------------------------------------------------------------------

def power_moment(family: FamilySpec, n: int, s, normalized: bool = False,
                 backend: str = "auto") -> Scalar:
    """``<x^s>_n = int x^s w p_n^2 dx``."""
    req = FunctionalRequest(family, (n, n), s, 1, "auto", backend)
    return _normalize(evaluate(req).value, family, n, normalized)


def krein_moment(family: FamilySpec, n: int, k, normalized: bool = False,
                 backend: str = "auto") -> Scalar:
    """``<w^k>_n = int w^(k+1) p_n^2 dx``."""
    k = as_param(k)
    if k <= -1:
        raise PreconditionError("k must exceed -1")
    req = FunctionalRequest(family, (n, n), 0, k + 1, "auto", backend)
    return _normalize(evaluate(req).value, family, n, normalized)


# ---------------------------------------------------------------------------
# high-precision samples
# ---------------------------------------------------------------------------

def _mpq(x: Fraction):
    return mpmath.mpf(x.numerator) / x.denominator


def _fr(x) -> Fraction:
    return x.as_fraction()


def _abs_power_moment_mp(family: FamilySpec, n: int, s: Fraction):
    """``int |x|^s w p_n^2 dx`` at the current mpmath precision (s real)."""
    if family.kind == "laguerre":
        a = family.alpha
        c = a + s + 1
        if c <= 0:
            raise PreconditionError("need alpha + s > -1")
        core = _fr(lauricella_fa(TerminatingSeriesSpec(c, (-n, -n), (a + 1, a + 1), (1, 1))))
        core *= _fr(gen_binomial(n + a, n)) ** 2
        return mpmath.gamma(_mpq(c)) * _mpq(core)
    if family.kind == "hermite":
        if s <= -1:
            raise PreconditionError("need s > -1")
        nu = n % 2
        h = (n - nu) // 2
        c = (s + 2 * nu + 1) / 2
        core = _fr(lauricella_fa(TerminatingSeriesSpec(
            c, (-h, -h), (nu + Fraction(1, 2),) * 2, (1, 1))))
        scale = math.factorial(n) / _fr(pochhammer(Fraction(1, 2), (n + nu) // 2))
        core *= (scale * _fr(gen_binomial(Fraction(n + nu - 1, 2), h))) ** 2
        return mpmath.gamma(_mpq(c)) * _mpq(core)
    if s <= -1:
        raise PreconditionError("need s > -1")
    a, g = _mpq(family.alpha), _mpq(family.gamma)
    sp = _mpq(s)
    total = mpmath.mpf(0)
    for u, cu in enumerate(product_poly(family, (n, n)).coeffs):
        if not cu:
            continue
        p = sp + u
        right = mpmath.beta(p + 1, a + 1) * mpmath.hyp2f1(-g, p + 1, p + a + 2, -1)
        left = mpmath.beta(p + 1, g + 1) * mpmath.hyp2f1(-a, p + 1, p + g + 2, -1)
        total += _mpq(cu) * (right + (-1) ** u * left)
    return total


def _log_c0_mp(family: FamilySpec, n: int, beta: Fraction):
    """Logarithm of the beta-dependent hypergeometric factor of ``J_{n,n}(0, beta)``."""
    if family.kind == "laguerre":
        a = family.alpha
        c = a * beta + 1
        core = _fr(lauricella_fa(TerminatingSeriesSpec(c, (-n, -n), (a + 1, a + 1), (1 / beta,) * 2)))
        core *= _fr(gen_binomial(n + a, n)) ** 2
        return mpmath.loggamma(_mpq(c)) + mpmath.log(abs(_mpq(core)))
    if family.kind == "hermite":
        nu = n % 2
        h = (n - nu) // 2
        core = _fr(lauricella_fa(TerminatingSeriesSpec(
            Fraction(2 * nu + 1, 2), (-h, -h), (nu + Fraction(1, 2),) * 2, (1 / beta,) * 2)))
        return mpmath.log(abs(_mpq(core)))
    a, g = family.alpha, family.gamma
    core = _fr(srivastava_daoust(SrivastavaDaoustSpec(
        a * beta + 1, ((-n, a + g + n + 1),) * 2, beta * (a + g) + 2, (a + 1,) * 2, (1, 1))))
    core *= _fr(gen_binomial(n + a, n)) ** 2
    return mpmath.log(abs(_mpq(core)))


# ---------------------------------------------------------------------------
# finite differences
# ---------------------------------------------------------------------------

def central_difference(f, x0: Fraction, k: int, h: Fraction):
    """``delta^k f(x0) / h^k`` with the symmetric k+1 point stencil."""
    acc = mpmath.mpf(0)
    for j in range(k + 1):
        acc += (-1) ** j * math.comb(k, j) * f(x0 + (Fraction(k, 2) - j) * h)
    return acc / _mpq(h) ** k


def richardson_derivative(f, x0, k: int, h=FD_STEP, levels: int = FD_LEVELS):
    """k-th derivative of ``f`` at ``x0`` by step halving and Richardson extrapolation.

    Returns ``(estimate, error_estimate)``; the error is the larger of the
    last two tableau corrections.
    """
    x0, h = Fraction(x0), Fraction(h)
    table = []
    for i in range(levels):
        row = [central_difference(f, x0, k, h / 2 ** i)]
        for j in range(1, i + 1):
            row.append(row[j - 1] + (row[j - 1] - table[i - 1][j - 1]) / (4 ** j - 1))
        table.append(row)
    best = table[-1][-1]
    if levels == 1:
        return best, abs(best)
    err = max(abs(best - table[-1][-2]), abs(best - table[-2][-1]))
    return best, err


def _to_approx(value, err, tol: float, what: str) -> ApproxValue:
    v = float(value)
    out = ApproxValue(v, float(err) + 4 * EPS * abs(v))
    if out.abserr > tol * max(abs(v), 1.0):
        raise AccuracyError(f"{what}: extrapolation error {out.abserr:.2e} exceeds {tol:.1e}", out)
    return out


# ---------------------------------------------------------------------------
# logarithmic moments
# ---------------------------------------------------------------------------

def log_moment(family: FamilySpec, n: int, k: int, normalized: bool = False,
               tol: float = 1e-8) -> Scalar:
    """``<(log|x|)^k>_n``: k-th s-derivative of the power moment at s = 0.

    For Hermite and Jacobi the power kernel is ``|x|^s``, so the result is the
    moment of ``log|x|``.
    """
    if k < 0:
        raise PreconditionError("k must be nonnegative")
    if k == 0:
        return power_moment(family, n, 0, normalized)
    with mpmath.workdps(DPS):
        value, err = richardson_derivative(lambda s: _abs_power_moment_mp(family, n, s), 0, k)
        if normalized:
            h = _abs_power_moment_mp(family, n, Fraction(0))
            value, err = value / h, err / h
    return _to_approx(value, err, tol, "log_moment")


# ---------------------------------------------------------------------------
# exponential functional
# ---------------------------------------------------------------------------

def _majorant_coeffs(family: FamilySpec, n: int) -> list[Fraction]:
    """Coefficients of a polynomial in |x| bounding ``p_n(x)^2`` from above."""
    p = poly_coeffs(family, n)
    q = [abs(c) for c in p.coeffs]
    out = [Fraction(0)] * (2 * len(q) - 1)
    for i, a in enumerate(q):
        for j, b in enumerate(q):
            out[i + j] += a * b
    return out


def _abs_moment_bound(family: FamilySpec, n: int, t: Fraction) -> float:
    """Upper bound for ``int |x|^t w p_n^2 dx``."""
    if family.kind == "jacobi":
        return float(norm_h(family, n))
    q = _majorant_coeffs(family, n)
    a = float(family.alpha)
    acc = 0.0
    for u, c in enumerate(q):
        if not c:
            continue
        if family.kind == "laguerre":
            acc += float(c) * math.exp(math.lgamma(float(t) + u + a + 1))
        else:
            acc += float(c) * math.exp(math.lgamma((float(t) + u + 1) / 2))
    return acc


def _ratio_bound(family: FamilySpec, n: int, k: Fraction, a: float, m: int) -> float:
    """Upper bound on term(m'+1)/term(m') for every m' >= m of the majorant series."""
    t = float(k) + m
    if family.kind == "jacobi":
        return a / (m + 1)
    if family.kind == "laguerre":
        # a (m + c)/(m + 1) only decreases in m when c >= 1
        c = float(k) + 2 * n + float(family.alpha) + 1
        return max(a * (m + c) / (m + 1), a if c < 1 else 0.0)
    # Gamma(z + 1/2)/Gamma(z) <= sqrt(z)
    return a * math.sqrt((t + 2 * n + 2) / 2) / (m + 1)


def _laguerre_rate_closed_form(family: FamilySpec, n: int, k: Fraction, rate: Fraction) -> Scalar:
    """``int x^(alpha+k) e^{-rate x} L_n^2 dx`` through the r-ary closed form."""
    a = family.alpha
    c = a + k + 1
    with mpmath.workdps(DPS):
        core = _fr(lauricella_fa(TerminatingSeriesSpec(c, (-n, -n), (a + 1, a + 1), (1 / rate,) * 2)))
        core *= _fr(gen_binomial(n + a, n)) ** 2
        v = mpmath.gamma(_mpq(c)) * mpmath.power(_mpq(rate), -_mpq(c)) * _mpq(core)
        v = float(v)
    return ApproxValue(v, 4 * EPS * abs(v))


@dataclass(frozen=True)
class ExpSeries:
    value: ApproxValue
    terms: int
    tail_bound: float
    method: str


def exp_functional_report(family: FamilySpec, n: int, k, a, tol: float = 1e-12,
                          cap: int = TERM_CAP) -> ExpSeries:
    """``<x^k e^{-a x}>_n`` with its truncation diagnostics.

    Summed as ``sum_m (-a)^m/m! <x^(k+m)>_n`` until a majorant tail bound falls
    below ``tol`` relative. For Laguerre with ``a >= 1/2`` the series converges
    too slowly (and diverges for ``a >= 1``), so the exponential is folded
    into the weight and the closed form is used instead.
    """
    k, a = as_param(k), as_param(a)
    if a < 0:
        raise PreconditionError("the exponential rate a must be nonnegative")
    if k < 0:
        raise PreconditionError("k must be nonnegative")
    if family.kind != "laguerre" and k.denominator != 1:
        raise PreconditionError(f"{family.kind} k must be an integer")
    if family.kind == "laguerre" and a >= Fraction(1, 2):
        v = _laguerre_rate_closed_form(family, n, k, 1 + a)
        return ExpSeries(v, 1, 0.0, "closed_form")
    af = float(a)
    total: Scalar = ExactValue(0)
    coef = Fraction(1)
    for m in range(cap + 1):
        if m:
            coef = coef * -a / m
        if coef:
            total = total + power_moment(family, n, k + m) * ExactValue(coef)
        rho = _ratio_bound(family, n, k, af, m + 1)
        if rho < 1:
            nxt = af ** (m + 1) / math.factorial(m + 1) * _abs_moment_bound(family, n, k + m + 1)
            tail = nxt / (1 - rho)
            if tail <= tol * abs(float(total)) or tail == 0.0:
                approx = ApproxValue.of(total)
                return ExpSeries(ApproxValue(approx.value, approx.abserr + tail), m + 1, tail, "series")
    approx = ApproxValue.of(total)
    raise AccuracyError(f"exp_functional did not reach {tol:.1e} within {cap} terms", approx)


def exp_functional(family: FamilySpec, n: int, k, a, normalized: bool = False,
                   tol: float = 1e-12) -> Scalar:
    """``int x^k e^{-a x} w p_n^2 dx`` (float result with the tail in its budget)."""
    if as_param(a) == 0:
        return _backend(power_moment(family, n, k, normalized), "float")
    v = exp_functional_report(family, n, k, a, tol).value
    return _normalize(v, family, n, normalized)


# ---------------------------------------------------------------------------
# weight-log functional
# ---------------------------------------------------------------------------

def weight_log_functional(family: FamilySpec, n: int, k, normalized: bool = False,
                          tol: float = 1e-8) -> Scalar:
    """``<w^k log w>_n = int w^(k+1) log(w) p_n^2 dx`` (the k-derivative of the Krein moment)."""
    k = as_param(k)
    if k <= -1:
        raise PreconditionError("k must exceed -1")
    beta = k + 1
    j = krein_moment(family, n, k)
    with mpmath.workdps(DPS):
        dlog, err = richardson_derivative(lambda b: _log_c0_mp(family, n, b), beta, 1)
        if family.kind == "laguerre":
            a = _mpq(family.alpha)
            extra = -1 / _mpq(beta) - a * (1 + mpmath.log(_mpq(beta)))
            extra_err = 0.0
        elif family.kind == "hermite":
            big_n = 2 * (n % 2)
            extra = -mpmath.mpf(big_n + 1) / (2 * _mpq(beta))
            extra_err = 0.0
        else:
            a, g = family.alpha, family.gamma
            h1 = to_scalar(harmonic_general(a * beta))
            h2 = to_scalar(harmonic_general(g * beta))
            h3 = to_scalar(harmonic_general(1 + beta * (a + g)))
            extra = (
                _mpq(a) * float(h1) + _mpq(g) * float(h2)
                - _mpq(a + g) * (float(h3) - mpmath.log(2))
            )
            extra_err = sum(
                abs(float(c)) * (h.abserr if isinstance(h, ApproxValue) else 4 * EPS * abs(float(h)))
                for c, h in ((a, h1), (g, h2), (a + g, h3))
            )
        bracket = ApproxValue(float(dlog + extra), float(err) + extra_err + 4 * EPS * abs(float(dlog + extra)))
    if bracket.abserr > tol * max(abs(bracket.value), 1.0):
        raise AccuracyError("weight_log_functional: derivative did not converge", bracket * j)
    value = ApproxValue.of(j) * bracket
    return _normalize(value, family, n, normalized)


# ---------------------------------------------------------------------------
# request wrapper
# ---------------------------------------------------------------------------

MOMENT_KINDS = ("power", "krein", "log", "exp", "weight_log")


@dataclass(frozen=True)
class MomentRequest:
    family: FamilySpec
    n: int
    kind: str
    k: Fraction = Fraction(0)
    a: Fraction = Fraction(0)
    normalized: bool = False
    backend: str = "auto"

    def __post_init__(self):
        if self.kind not in MOMENT_KINDS:
            raise PreconditionError(f"unknown moment kind {self.kind!r}")
        if self.n < 0:
            raise PreconditionError("degree must be nonnegative")
        object.__setattr__(self, "k", as_param(self.k))
        object.__setattr__(self, "a", as_param(self.a))


def moment(req: MomentRequest) -> Scalar:
    """Dispatch a :class:`MomentRequest`. ``k`` is s for power moments."""
    f, n, k = req.family, req.n, req.k
    if req.kind == "power":
        v = power_moment(f, n, k, req.normalized, req.backend)
    elif req.kind == "krein":
        v = krein_moment(f, n, k, req.normalized, req.backend)
    elif req.kind == "log":
        if k.denominator != 1:
            raise PreconditionError("log moment order must be an integer")
        v = log_moment(f, n, int(k), req.normalized)
    elif req.kind == "exp":
        v = exp_functional(f, n, k, req.a, req.normalized)
    else:
        v = weight_log_functional(f, n, k, req.normalized)
    return _backend(v, req.backend)
