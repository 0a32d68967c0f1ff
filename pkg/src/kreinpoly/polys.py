"""Classical orthogonal polynomials in exact monomial form.

Laguerre ``L_n^(alpha)`` (weight ``x^alpha e^-x`` on (0, inf)), Hermite
``H_n`` (weight ``e^-x^2`` on R) and Jacobi ``P_n^(alpha,gamma)`` (weight
``(1-x)^alpha (1+x)^gamma`` on (-1, 1)), plus norms, the Hermite-to-Laguerre
reduction, Jacobi parameter-shift coefficients and monomial inversions.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import PreconditionError
from .exact import (
    ONE,
    SQRT_PI,
    ExactValue,
    Scalar,
    format_scalar,
    gamma_lattice,
    gamma_ratio,
    gen_binomial,
    parse_scalar,
    pochhammer,
    rational_of,
    rational_power,
)
from .hyper import hyp2f1_terminating, hyp3f2_terminating

#: Largest polynomial degree accepted; rational coefficient sizes grow fast.
DEGREE_CAP = 64

KINDS = ("laguerre", "hermite", "jacobi")


def as_param(x) -> Fraction:
    """Parse a family/request parameter into an exact Fraction.

    Accepts ints, Fractions, ``"p/q"`` or decimal strings and floats (via
    their shortest decimal repr, so ``0.3`` means 3/10).
    """
    if isinstance(x, bool):
        raise TypeError("bool is not a parameter")
    if isinstance(x, float):
        if not math.isfinite(x):
            raise PreconditionError(f"non-finite parameter {x}")
        return Fraction(repr(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    r = rational_of(x)
    if r is None:
        raise TypeError(f"parameter {x!r} is not rational")
    return r


@dataclass(frozen=True)
class FamilySpec:
    """A classical family and its weight parameters."""

    kind: str
    alpha: Fraction = Fraction(0)
    gamma: Fraction = Fraction(0)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise PreconditionError(f"unknown family {self.kind!r}")
        object.__setattr__(self, "alpha", as_param(self.alpha))
        object.__setattr__(self, "gamma", as_param(self.gamma))
        if self.kind == "hermite" and (self.alpha or self.gamma):
            raise PreconditionError("Hermite polynomials take no weight parameters")
        if self.kind == "laguerre" and self.gamma:
            raise PreconditionError("Laguerre polynomials take only alpha")
        if self.alpha <= -1 or self.gamma <= -1:
            raise PreconditionError("weight parameters must exceed -1")

    @classmethod
    def laguerre(cls, alpha=0) -> "FamilySpec":
        return cls("laguerre", alpha)

    @classmethod
    def hermite(cls) -> "FamilySpec":
        return cls("hermite")

    @classmethod
    def jacobi(cls, alpha=0, gamma=0) -> "FamilySpec":
        return cls("jacobi", alpha, gamma)

    def __str__(self):
        if self.kind == "laguerre":
            return f"laguerre(alpha={self.alpha})"
        if self.kind == "jacobi":
            return f"jacobi(alpha={self.alpha}, gamma={self.gamma})"
        return "hermite"


class MonomialPoly:
    """Dense polynomial with exact rational coefficients, lowest degree first."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable = ()):
        c = [Fraction(v) if not isinstance(v, ExactValue) else v.as_fraction() for v in coeffs]
        while c and c[-1] == 0:
            c.pop()
        object.__setattr__(self, "coeffs", tuple(c))

    def __setattr__(self, name, value):
        raise AttributeError("MonomialPoly is immutable")

    @classmethod
    def monomial(cls, k: int, c=1) -> "MonomialPoly":
        return cls([0] * k + [c])

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, k: int) -> Fraction:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else Fraction(0)

    def __len__(self):
        return len(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, MonomialPoly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, other: "MonomialPoly") -> "MonomialPoly":
        n = max(len(self), len(other))
        return MonomialPoly(self[k] + other[k] for k in range(n))

    def __sub__(self, other: "MonomialPoly") -> "MonomialPoly":
        return self + other.scale(-1)

    def scale(self, c) -> "MonomialPoly":
        c = Fraction(c) if not isinstance(c, ExactValue) else c.as_fraction()
        return MonomialPoly(v * c for v in self.coeffs)

    def __mul__(self, other):
        if not isinstance(other, MonomialPoly):
            return self.scale(other)
        if not self.coeffs or not other.coeffs:
            return MonomialPoly()
        out = [Fraction(0)] * (len(self) + len(other) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return MonomialPoly(out)

    __rmul__ = __mul__

    def shift(self, k: int) -> "MonomialPoly":
        """Multiply by ``x**k``."""
        if not self.coeffs:
            return self
        return MonomialPoly([0] * k + list(self.coeffs))

    def __call__(self, x):
        acc = 0 * x
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def to_json(self) -> str:
        return json.dumps([format_scalar(ExactValue(c)) for c in self.coeffs])

    @classmethod
    def from_json(cls, text: str) -> "MonomialPoly":
        return cls(parse_scalar(s) for s in json.loads(text))

    def __repr__(self):
        return f"MonomialPoly({[str(c) for c in self.coeffs]})"


def _check_degree(n: int) -> None:
    if n < 0:
        raise PreconditionError("degree must be nonnegative")
    if n > DEGREE_CAP:
        raise PreconditionError(f"degree {n} exceeds the cap {DEGREE_CAP}")


@lru_cache(maxsize=4096)
def _coeffs_cached(kind: str, alpha: Fraction, gamma: Fraction, n: int) -> MonomialPoly:
    if kind == "laguerre":
        # L_n^(a)(x) = sum_i (-1)^i / i! * C(n+a, n-i) x^i
        return MonomialPoly(
            Fraction((-1) ** i, math.factorial(i)) * gen_binomial(n + alpha, n - i).as_fraction()
            for i in range(n + 1)
        )
    if kind == "hermite":
        out = [Fraction(0)] * (n + 1)
        for k in range(n // 2 + 1):
            out[n - 2 * k] = Fraction(
                (-1) ** k * math.factorial(n) * 2 ** (n - 2 * k),
                math.factorial(k) * math.factorial(n - 2 * k),
            )
        return MonomialPoly(out)
    # Jacobi: C(n+a, n) * sum_j (-n)_j (n+a+g+1)_j / ((a+1)_j j!) ((1-x)/2)^j
    lead = gen_binomial(n + alpha, n).as_fraction()
    out = [Fraction(0)] * (n + 1)
    w = Fraction(1)
    for j in range(n + 1):
        if j:
            w = w * (-n + j - 1) * (n + alpha + gamma + j) / ((alpha + j) * j)
        for i in range(j + 1):
            out[i] += lead * w * math.comb(j, i) * Fraction((-1) ** i, 2 ** j)
    return MonomialPoly(out)


def poly_coeffs(family: FamilySpec, n: int) -> MonomialPoly:
    """Exact monomial coefficients of ``L_n^(alpha)``, ``H_n`` or ``P_n^(alpha,gamma)``."""
    _check_degree(n)
    return _coeffs_cached(family.kind, family.alpha, family.gamma, n)


def norm_h(family: FamilySpec, n: int) -> Scalar:
    """Squared norm ``int w p_n^2`` of the family's n-th polynomial."""
    _check_degree(n)
    if family.kind == "laguerre":
        return gamma_lattice(n + family.alpha + 1) / math.factorial(n)
    if family.kind == "hermite":
        return SQRT_PI * (2 ** n * math.factorial(n))
    a, b = family.alpha, family.gamma
    two = rational_power(2, a + b + 1)
    if n == 0:
        return two * gamma_lattice(a + 1) * gamma_lattice(b + 1) / gamma_lattice(a + b + 2)
    return (
        two
        * gamma_lattice(a + n + 1)
        * gamma_lattice(b + n + 1)
        / (math.factorial(n) * (a + b + 2 * n + 1) * gamma_lattice(a + b + n + 1))
    )


@dataclass(frozen=True)
class HermiteLaguerre:
    """``H_m(x) = sign * scale * x**nu * L_degree^(param)(x**2)``."""

    sign: int
    scale: Fraction
    nu: int
    degree: int
    param: Fraction


def hermite_to_laguerre(m: int) -> HermiteLaguerre:
    """Reduce ``H_m`` to a Laguerre polynomial in ``x**2`` of parameter ``nu - 1/2``."""
    _check_degree(m)
    nu = m % 2
    half = (m - nu) // 2
    scale = Fraction(math.factorial(m)) / pochhammer(Fraction(1, 2), (m + nu) // 2).as_fraction()
    return HermiteLaguerre((-1) ** half, scale, nu, half, Fraction(2 * nu - 1, 2))


def hermite_from_laguerre(hl: HermiteLaguerre) -> MonomialPoly:
    """Expand the right side of :func:`hermite_to_laguerre` in monomials."""
    lag = poly_coeffs(FamilySpec.laguerre(hl.param), hl.degree)
    out = [Fraction(0)] * (2 * hl.degree + hl.nu + 1)
    for i, c in enumerate(lag.coeffs):
        out[2 * i + hl.nu] = hl.sign * hl.scale * c
    return MonomialPoly(out)


# ---------------------------------------------------------------------------
# Jacobi parameter shift and monomial inversions
# ---------------------------------------------------------------------------

def _shift_connection(k, a, g, lam, dlt, j) -> Scalar:
    # coefficient of P_j^(lam,dlt) in P_k^(a,g)
    bsum = lam + dlt
    pre = (
        pochhammer(a + g + k + 1, j)
        * pochhammer(a + j + 1, k - j)
        / (math.factorial(k - j) * pochhammer(bsum + j + 1, j))
    )
    f = hyp3f2_terminating(-k + j, a + g + k + j + 1, lam + j + 1, a + j + 1, bsum + 2 * j + 2, 1)
    return pre * f


def _shift_pexp(i, a, g, lam, dlt, k) -> Scalar:
    # the same coefficient written through the parameter expansion of P_i^(a,g)
    bsum = lam + dlt
    if k == 0:
        tail = ONE / pochhammer(bsum + 2, i)
    else:
        tail = ExactValue(bsum + 2 * k + 1) / pochhammer(k + bsum + 1, i + 1)
    pre = (
        ExactValue((-1) ** (i - k), 1)
        * tail
        * gamma_ratio(i + g + 1, k + g + 1)
        * gamma_ratio(i + lam + 1, k + lam + 1)
        * gamma_ratio(i + k + a + g + 1, i + a + g + 1)
        / math.factorial(i - k)
    )
    f = hyp3f2_terminating(k - i, -a - i, dlt + k + 1, -i - lam, g + k + 1, 1)
    return pre * f


def jacobi_param_shift(k: int, alpha, gamma, beta, formula: str = "connection") -> list[Scalar]:
    """Coefficients ``c_j`` with ``P_k^(alpha,gamma) = sum_j c_j P_j^(alpha*beta, gamma*beta)``.

    ``formula="connection"`` uses the classical connection coefficients
    (a terminating 3F2 at unit argument); ``formula="pexp"`` uses the
    parameter-expansion form with the ``-i - Lambda`` lower parameter.
    """
    _check_degree(k)
    a, g, b = as_param(alpha), as_param(gamma), as_param(beta)
    lam, dlt = a * b, g * b
    if lam <= -1 or dlt <= -1:
        raise PreconditionError("shifted parameters alpha*beta, gamma*beta must exceed -1")
    return list(_param_shift_cached(k, a, g, lam, dlt, formula))


@lru_cache(maxsize=8192)
def _param_shift_cached(k, a, g, lam, dlt, formula) -> tuple:
    if formula == "connection":
        return tuple(_shift_connection(k, a, g, lam, dlt, j) for j in range(k + 1))
    if formula == "pexp":
        return tuple(_shift_pexp(k, a, g, lam, dlt, j) for j in range(k + 1))
    raise ValueError(f"unknown formula {formula!r}")


def monomial_inversion(s: int, family: FamilySpec) -> list[Scalar]:
    """Coefficients ``d_l`` with ``x**s = sum_l d_l p_l(x)`` in the family's basis."""
    _check_degree(s)
    return list(_inversion_cached(s, family))


@lru_cache(maxsize=4096)
def _inversion_cached(s: int, family: FamilySpec) -> tuple:
    if family.kind == "laguerre":
        a = family.alpha
        return tuple(
            gen_binomial(s + a, s - k) * ((-1) ** k * math.factorial(s)) for k in range(s + 1)
        )
    if family.kind == "hermite":
        out = [ExactValue(0)] * (s + 1)
        for k in range(s // 2 + 1):
            out[s - 2 * k] = ExactValue(
                Fraction(math.factorial(s), 2 ** s * math.factorial(k) * math.factorial(s - 2 * k))
            )
        return tuple(out)
    a, b = family.alpha, family.gamma
    out = []
    for j in range(s + 1):
        f = hyp2f1_terminating(j - s, b + j + 1, a + b + 2 * j + 2, 2)
        out.append(
            ExactValue((-1) ** (s - j) * math.comb(s, j) * 2 ** j * math.factorial(j))
            * f
            / pochhammer(a + b + j + 1, j)
        )
    return tuple(out)


def basis_coefficients(target: MonomialPoly, family: FamilySpec, top: int | None = None) -> list[Fraction]:
    """Expand ``target`` in the family basis by triangular elimination.

    Independent of every closed-form coefficient formula; used as the
    monomial-basis check for them.
    """
    n = target.degree if top is None else top
    rest = list(target.coeffs) + [Fraction(0)] * max(0, n + 1 - len(target))
    out = [Fraction(0)] * (n + 1)
    for d in range(n, -1, -1):
        p = poly_coeffs(family, d)
        c = rest[d] / p[d]
        out[d] = c
        if c:
            for i, v in enumerate(p.coeffs):
                rest[i] -= c * v
    if any(rest):
        raise ValueError("target degree exceeds the requested basis range")
    return out


def assemble(coeffs: Sequence, family: FamilySpec) -> MonomialPoly:
    """``sum_k coeffs[k] * p_k`` in monomial form (rational coefficients only)."""
    out = MonomialPoly()
    for k, c in enumerate(coeffs):
        r = rational_of(c)
        if r is None:
            raise TypeError("assemble needs rational coefficients")
        if r:
            out = out + poly_coeffs(family, k).scale(r)
    return out
