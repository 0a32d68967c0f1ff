"""Krein-like functionals ``int w(x)^beta x^s p_m1(x) ... p_mr(x) dx``.

Three independent closed-form routes plus the expansion oracle:

``lauricella``
    r-ary hypergeometric form (Lauricella F_A for Laguerre and Hermite, a
    Srivastava-Daoust array for Jacobi). Any number of polynomials.
``ode``
    expansion of ``x^s p_m`` followed by a product linearization (r = 2).
``algebraic``
    product linearization followed by termwise integration (r = 2).
``oracle``
    monomial expansion with exact termwise integrals.

Each route splits its result into a prefactor carrying every Gamma, radical
and power of beta, times an exact rational sum. For parameters on the
half-integer lattice the prefactor is exact too and all routes return the
identical ``ExactValue``.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .errors import (
    KreinError,
    NotExactError,
    PreconditionError,
    RouteInapplicable,
)
from .exact import (
    ApproxValue,
    ExactValue,
    Scalar,
    ZERO,
    SQRT_PI,
    gamma_lattice,
    gamma_ratio,
    gen_binomial,
    half_lattice,
    pochhammer,
    rational_power,
)
from .hyper import (
    SrivastavaDaoustSpec,
    TerminatingSeriesSpec,
    hyp2f1_terminating,
    lauricella_fa_terms,
    srivastava_daoust_terms,
)
from .linearize import (
    hermite_product_coeff,
    hermite_xs_coeff,
    jacobi_product_coeff,
    jacobi_xs_coeff,
    laguerre_product_bracket,
    laguerre_product_coeff,
    laguerre_xs_coeff,
)
from .oracle import oracle_functional
from .polys import FamilySpec, as_param, jacobi_param_shift, monomial_inversion

ROUTES = ("lauricella", "ode", "algebraic", "oracle", "auto")
BACKENDS = ("auto", "exact", "float")


@dataclass(frozen=True)
class FunctionalRequest:
    family: FamilySpec
    degrees: tuple
    s: Fraction = Fraction(0)
    beta: Fraction = Fraction(1)
    route: str = "auto"
    backend: str = "auto"

    def __post_init__(self):
        object.__setattr__(self, "degrees", tuple(int(m) for m in self.degrees))
        object.__setattr__(self, "s", as_param(self.s))
        object.__setattr__(self, "beta", as_param(self.beta))
        if not self.degrees:
            raise PreconditionError("at least one degree is required")
        if any(m < 0 for m in self.degrees):
            raise PreconditionError("degrees must be nonnegative")
        if self.route not in ROUTES:
            raise PreconditionError(f"unknown route {self.route!r}")
        if self.backend not in BACKENDS:
            raise PreconditionError(f"unknown backend {self.backend!r}")
        if self.beta <= 0:
            raise PreconditionError("beta must be positive")
        fam, s, b = self.family, self.s, self.beta
        if fam.kind == "laguerre":
            if fam.alpha * b + s + 1 <= 0:
                raise PreconditionError("need alpha > -(s+1)/beta for convergence")
        else:
            if s.denominator != 1 or s < 0:
                raise PreconditionError(f"{fam.kind} power s must be a nonnegative integer")
            if fam.kind == "jacobi" and (fam.alpha * b <= -1 or fam.gamma * b <= -1):
                raise PreconditionError("need alpha, gamma > -1/beta for convergence")

    @property
    def r(self) -> int:
        return len(self.degrees)

    def with_route(self, route: str) -> "FunctionalRequest":
        return FunctionalRequest(self.family, self.degrees, self.s, self.beta, route, self.backend)


def make_request(family: str, degrees: Sequence[int], s=0, beta=1, alpha=0, gamma=0,
                 route: str = "auto", backend: str = "auto") -> FunctionalRequest:
    """Build a request from plain values (strings like ``"3/2"`` accepted)."""
    fam = FamilySpec(family, alpha, gamma) if family != "hermite" else FamilySpec.hermite()
    return FunctionalRequest(fam, tuple(degrees), s, beta, route, backend)


@dataclass(frozen=True)
class EvaluationReport:
    value: Scalar
    route: str
    terms: int
    seconds: float
    notes: tuple = field(default_factory=tuple)

    @property
    def error(self) -> float:
        return self.value.abserr if isinstance(self.value, ApproxValue) else 0.0


def _scale(base: Scalar, core: Fraction) -> Scalar:
    return ZERO if core == 0 else base * ExactValue(core)


def _fr(x) -> Fraction:
    return x.as_fraction()


# ---------------------------------------------------------------------------
# shared prefactors
# ---------------------------------------------------------------------------

def _laguerre_base(alpha: Fraction, s: Fraction, beta: Fraction):
    """``Gamma(c) beta^-c`` with ``c = alpha*beta + s + 1``."""
    c = alpha * beta + s + 1
    return c, gamma_lattice(c) * rational_power(beta, -c)


def _hermite_base(beta: Fraction, half_power: Fraction) -> Scalar:
    """``sqrt(pi) * beta^(-half_power)``."""
    return SQRT_PI * rational_power(beta, -half_power)


def _jacobi_base(lam: Fraction, dlt: Fraction) -> Scalar:
    """``int (1-x)^lam (1+x)^dlt dx`` over (-1, 1)."""
    return (
        rational_power(2, lam + dlt + 1)
        * gamma_lattice(lam + 1)
        * gamma_lattice(dlt + 1)
        / gamma_lattice(lam + dlt + 2)
    )


@lru_cache(maxsize=None)
def jacobi_norm_ratio(j: int, lam: Fraction, dlt: Fraction) -> Fraction:
    """``h_j / h_0`` for the Jacobi weight with parameters ``(lam, dlt)``."""
    if j == 0:
        return Fraction(1)
    bs = lam + dlt
    return (
        _fr(pochhammer(lam + 1, j)) * _fr(pochhammer(dlt + 1, j))
        * _fr(gamma_ratio(bs + 2, bs + j + 1))
        / (math.factorial(j) * (bs + 2 * j + 1))
    )


# ---------------------------------------------------------------------------
# lauricella route
# ---------------------------------------------------------------------------

def _lauricella_laguerre(req: FunctionalRequest):
    a, s, b = req.family.alpha, req.s, req.beta
    c, base = _laguerre_base(a, s, b)
    spec = TerminatingSeriesSpec(c, [-m for m in req.degrees], [a + 1] * req.r, [1 / b] * req.r)
    fa, count = lauricella_fa_terms(spec)
    core = _fr(fa)
    for m in req.degrees:
        core *= _fr(gen_binomial(m + a, m))
    return _scale(base, core), count


def _lauricella_hermite(req: FunctionalRequest):
    s, b = int(req.s), req.beta
    ms = req.degrees
    big_m = sum(ms)
    if (s + big_m) % 2:
        return ZERO, 0
    nus = [m % 2 for m in ms]
    big_n = sum(nus)
    spec = TerminatingSeriesSpec(
        Fraction(s + big_n + 1, 2),
        [-((m - nu) // 2) for m, nu in zip(ms, nus)],
        [nu + Fraction(1, 2) for nu in nus],
        [1 / b] * len(ms),
    )
    fa, count = lauricella_fa_terms(spec)
    core = _fr(fa) * _fr(pochhammer(Fraction(1, 2), (s + big_n) // 2))
    core *= (-1) ** ((big_m - big_n) // 2)
    for m, nu in zip(ms, nus):
        core *= _fr(gen_binomial(Fraction(m + nu - 1, 2), (m - nu) // 2))
        core *= math.factorial(m) / _fr(pochhammer(Fraction(1, 2), (m + nu) // 2))
    return _scale(_hermite_base(b, Fraction(big_n + s + 1, 2)), core), count


@lru_cache(maxsize=65536)
def _jacobi_sd_core(a: Fraction, g: Fraction, degrees: tuple, i: int, beta: Fraction):
    """``int ((1-x)/2)^i w^beta prod P dx`` divided by the plain weight integral."""
    lam = a * beta
    bs = beta * (a + g)
    spec = SrivastavaDaoustSpec(
        lam + i + 1,
        [(-m, a + g + m + 1) for m in degrees],
        bs + i + 2,
        [a + 1] * len(degrees),
        [1] * len(degrees),
    )
    sd, count = srivastava_daoust_terms(spec)
    core = _fr(sd) * _fr(pochhammer(lam + 1, i)) / _fr(pochhammer(bs + 2, i))
    for m in degrees:
        core *= _fr(gen_binomial(m + a, m))
    return core, count


def _lauricella_jacobi(req: FunctionalRequest):
    fam, s, b = req.family, int(req.s), req.beta
    base = _jacobi_base(fam.alpha * b, fam.gamma * b)
    # x = 1 - 2t with t = (1-x)/2
    core, total = Fraction(0), 0
    for i in range(s + 1):
        k, count = _jacobi_sd_core(fam.alpha, fam.gamma, tuple(sorted(req.degrees)), i, b)
        core += math.comb(s, i) * (-2) ** i * k
        total += count
    return _scale(base, core), total


def krein_lauricella(req: FunctionalRequest) -> Scalar:
    """Value of the functional through the r-ary hypergeometric closed form."""
    return _lauricella(req)[0]


def _lauricella(req):
    kind = req.family.kind
    if kind == "laguerre":
        return _lauricella_laguerre(req)
    if kind == "hermite":
        return _lauricella_hermite(req)
    return _lauricella_jacobi(req)


# ---------------------------------------------------------------------------
# ode route
# ---------------------------------------------------------------------------

def _require_pair(req: FunctionalRequest, route: str):
    if req.r != 2:
        raise RouteInapplicable(f"the {route} route needs exactly two polynomials, got {req.r}")
    return req.degrees


def _ode_laguerre(req: FunctionalRequest):
    m, n = _require_pair(req, "ode")
    a, s, b = req.family.alpha, req.s, req.beta
    g = s + a * (b - 1)
    if g.denominator != 1 or g < 0:
        raise RouteInapplicable("ode route needs s + alpha*(beta-1) to be a nonnegative integer")
    g = int(g)
    base = gamma_lattice(a + 1) * rational_power(b, -(a + 1))
    q = (b - 1) / b
    # int x^a e^{-b x} L_k^(a) = Gamma(a+1) b^{-a-1} (a+1)_k / k! q^k
    tail = [Fraction(1)]
    for k in range(m + g + n):
        tail.append(tail[-1] * (a + 1 + k) / (k + 1) * q)
    core, terms = Fraction(0), 0
    for j in range(m + g + 1):
        cj = laguerre_xs_coeff(m, g, j, a)
        if not cj:
            continue
        inner = Fraction(0)
        for k in range(j + n + 1):
            d = laguerre_product_coeff(j, n, k, a)
            if d:
                inner += d * tail[k]
                terms += 1
        core += cj * inner
    return _scale(base, core), terms


def _ode_hermite(req: FunctionalRequest):
    m, n = _require_pair(req, "ode")
    s, b = int(req.s), req.beta
    if (m + n + s) % 2:
        return ZERO, 0
    q = (1 - b) / b
    core, terms = Fraction(0), 0
    for j in range((m + s) // 2 + 1):
        cj = hermite_xs_coeff(m, s, j)
        top = m + s - 2 * j
        inner = Fraction(0)
        for k in range(min(top, n) + 1):
            deg = top + n - 2 * k
            if deg % 2:
                continue
            p = deg // 2
            integral = Fraction(math.factorial(2 * p), math.factorial(p)) * q ** p
            inner += hermite_product_coeff(top, n, k) * integral
            terms += 1
        core += cj * inner
    return _scale(_hermite_base(b, Fraction(1, 2)), core), terms


def _ode_jacobi(req: FunctionalRequest):
    m, n = _require_pair(req, "ode")
    fam, s, b = req.family, int(req.s), req.beta
    lam, dlt = fam.alpha * b, fam.gamma * b
    shift_m = [_fr(c) for c in jacobi_param_shift(m, fam.alpha, fam.gamma, b, "pexp")]
    shift_n = [_fr(c) for c in jacobi_param_shift(n, fam.alpha, fam.gamma, b, "pexp")]
    core, terms = Fraction(0), 0
    for k, ak in enumerate(shift_n):
        if not ak:
            continue
        for j, aj in enumerate(shift_m):
            if not aj or j > k + s:
                continue
            c = jacobi_xs_coeff(k, s, j, lam, dlt)
            terms += 1
            if c:
                core += ak * aj * c * jacobi_norm_ratio(j, lam, dlt)
    return _scale(_jacobi_base(lam, dlt), core), terms


def krein_ode(req: FunctionalRequest) -> Scalar:
    """Value through the ``x^s p_m`` expansion and a product linearization (r = 2)."""
    return _ode(req)[0]


def _ode(req):
    kind = req.family.kind
    if kind == "laguerre":
        return _ode_laguerre(req)
    if kind == "hermite":
        return _ode_hermite(req)
    return _ode_jacobi(req)


# ---------------------------------------------------------------------------
# algebraic route
# ---------------------------------------------------------------------------

def _algebraic_laguerre(req: FunctionalRequest):
    m, n = _require_pair(req, "algebraic")
    a, s, b = req.family.alpha, req.s, req.beta
    c, base = _laguerre_base(a, s, b)
    # int x^(c-1) e^{-bx} L_k^(a) = Gamma(c) b^-c sum_t (-1)^t/t! C(k+a, k-t) (c)_t b^-t
    moments = [Fraction(1)]
    for t in range(m + n):
        moments.append(moments[-1] * (c + t) / b / (t + 1) * -1)
    core, terms = Fraction(0), 0
    for k in range(abs(m - n), m + n + 1):
        lk = laguerre_product_bracket(n, m, k, a)
        if not lk:
            continue
        # C(k+a, u) for u = k - t, built upward from u = 0
        inner, binom = Fraction(0), Fraction(1)
        for u in range(k + 1):
            inner += binom * moments[k - u]
            binom = binom * (k + a - u) / (u + 1)
            terms += 1
        core += lk * inner
    return _scale(base, core), terms


def _algebraic_hermite(req: FunctionalRequest):
    m, n = _require_pair(req, "algebraic")
    s, b = int(req.s), req.beta
    tot = m + n + s
    if tot % 2:
        return ZERO, 0
    # every Gamma(1/2 - k + tot/2) carries exactly one sqrt(pi)
    core, terms = Fraction(0), 0
    for k in range(min(m, n) + 1):
        g = gamma_lattice(Fraction(1, 2) - k + Fraction(tot, 2)).q
        f = _fr(hyp2f1_terminating(
            k - Fraction(m + n, 2), Fraction(1, 2) + k - Fraction(m + n, 2),
            Fraction(1, 2) + k - Fraction(tot, 2), b,
        ))
        core += math.comb(m, k) * math.comb(n, k) * math.factorial(k) * (b / 2) ** k * g * f
        terms += 1 + (m + n) // 2 - k
    core *= 2 ** (m + n)
    return _scale(_hermite_base(b, Fraction(tot + 1, 2)), core), terms


def _algebraic_jacobi(req: FunctionalRequest):
    m, n = _require_pair(req, "algebraic")
    fam, s, b = req.family, int(req.s), req.beta
    a, g = fam.alpha, fam.gamma
    lam, dlt = a * b, g * b
    shifted = FamilySpec.jacobi(lam, dlt)
    d = [_fr(x) for x in monomial_inversion(s, shifted)]
    core, terms = Fraction(0), 0
    for k in range(abs(n - m), n + m + 1):
        bk = jacobi_product_coeff(n, m, k, a, g)
        if not bk:
            continue
        conn = jacobi_param_shift(k, a, g, b, "connection")
        inner = Fraction(0)
        for j in range(min(k, s) + 1):
            if d[j]:
                inner += _fr(conn[j]) * d[j] * jacobi_norm_ratio(j, lam, dlt)
                terms += 1
        core += bk * inner
    return _scale(_jacobi_base(lam, dlt), core), terms


def krein_algebraic(req: FunctionalRequest) -> Scalar:
    """Value through product linearization and termwise integration (r = 2)."""
    return _algebraic(req)[0]


def _algebraic(req):
    kind = req.family.kind
    if kind == "laguerre":
        return _algebraic_laguerre(req)
    if kind == "hermite":
        return _algebraic_hermite(req)
    return _algebraic_jacobi(req)


def _oracle(req):
    res = oracle_functional(req.family, req.degrees, req.s, req.beta)
    return res.value, math.prod(m + 1 for m in req.degrees)


_IMPL = {
    "lauricella": _lauricella,
    "ode": _ode,
    "algebraic": _algebraic,
    "oracle": _oracle,
}


# ---------------------------------------------------------------------------
# dispatch
# ---------------------------------------------------------------------------

def on_lattice(req: FunctionalRequest) -> bool:
    """True when every Gamma argument and power of the result is exact."""
    fam, s, b = req.family, req.s, req.beta
    if fam.kind == "laguerre":
        return half_lattice(fam.alpha * b + s) is not None
    if fam.kind == "hermite":
        return True
    return half_lattice(fam.alpha * b) is not None and half_lattice(fam.gamma * b) is not None


def _finish(value: Scalar, backend: str) -> Scalar:
    if backend == "exact" and isinstance(value, ApproxValue):
        raise NotExactError("the value involves Gamma off the half-integer lattice")
    if backend == "float" and isinstance(value, ExactValue):
        return ApproxValue.of(value)
    return value


def evaluate(req: FunctionalRequest) -> EvaluationReport:
    """Evaluate on the requested route, or pick one when ``route='auto'``.

    Auto order: algebraic (two polynomials, lattice parameters), then the
    r-ary closed form, then the expansion oracle.
    """
    notes = []
    if req.route != "auto":
        order = [req.route]
    else:
        order = []
        if req.r == 2 and on_lattice(req):
            order.append("algebraic")
        order += ["lauricella", "oracle"]
    last = None
    for route in order:
        t0 = time.perf_counter()
        try:
            value, terms = _IMPL[route](req)
        except RouteInapplicable as exc:
            if req.route != "auto":
                raise
            notes.append(f"{route}: {exc}")
            last = exc
            continue
        value = _finish(value, req.backend)
        return EvaluationReport(value, route, terms, time.perf_counter() - t0, tuple(notes))
    raise RouteInapplicable(
        f"no closed-form route applies ({last}); use route='oracle' for the expansion fallback"
    )


def evaluate_value(family: str, degrees, s=0, beta=1, alpha=0, gamma=0, route="auto",
                   backend="auto") -> Scalar:
    """Shorthand: build a request and return just the value."""
    return evaluate(make_request(family, degrees, s, beta, alpha, gamma, route, backend)).value


__all__ = [
    "FunctionalRequest",
    "EvaluationReport",
    "KreinError",
    "make_request",
    "krein_lauricella",
    "krein_ode",
    "krein_algebraic",
    "evaluate",
    "evaluate_value",
    "on_lattice",
    "jacobi_norm_ratio",
    "clear_caches",
]


def clear_caches() -> None:
    """Drop every memoized coefficient table (for cold-start timing)."""
    from . import linearize, oracle, polys

    for fn in (
        polys._coeffs_cached, polys._param_shift_cached, polys._inversion_cached,
        linearize.laguerre_xs_coeff, linearize.hermite_xs_coeff, linearize.jacobi_xs_coeff,
        linearize.laguerre_product_coeff, linearize.laguerre_product_bracket,
        linearize.jacobi_product_coeff,
        oracle._monomial_table, oracle._product_poly,
        jacobi_norm_ratio, _jacobi_sd_core,
    ):
        fn.cache_clear()
