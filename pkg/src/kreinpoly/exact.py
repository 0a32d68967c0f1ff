"""Scalar algebra: rationals adjoined with square roots and powers of sqrt(pi).

Every closed form handled by the library lives in the set

    q * sqrt(rad) * sqrt(pi)**e        q rational, rad squarefree, e integer

which is closed under multiplication and division. Sums are only defined
between values sharing the same ``(rad, e)`` tag, which is what every
in-scope formula produces (each route's terms carry one common radical
prefactor). Anything outside that set, e.g. Gamma at a non-half-integer
rational, falls back to :class:`ApproxValue`, a double with a propagated
absolute error budget.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from numbers import Rational
from typing import Union

import mpmath

from .errors import MixedRadicalError, PoleError, PreconditionError

EPS = 2.0 ** -53
# math.gamma is a Lanczos approximation, documented at ~1e-15; keep a margin.
GAMMA_REL = 1e-14
EULER_GAMMA = 0.57721566490153286061


def _squarefree_split(n: int) -> tuple[int, int]:
    """Return ``(k, r)`` with ``n == k*k*r`` and ``r`` squarefree.

    Trial division up to 10**4; a leftover cofactor is tested for being a
    perfect square. Radicands in practice are small (they come from beta).
    """
    if n <= 0:
        raise ValueError("radicand must be positive")
    k, r = 1, 1
    p = 2
    while p * p <= n and p < 10_000:
        if n % p == 0:
            c = 0
            while n % p == 0:
                n //= p
                c += 1
            k *= p ** (c // 2)
            if c % 2:
                r *= p
        p += 1 if p == 2 else 2
    if n > 1:
        s = math.isqrt(n)
        if s * s == n:
            k *= s
        else:
            r *= n
    return k, r


class ExactValue:
    """Immutable exact number ``q * sqrt(rad) * sqrt(pi)**e``."""

    __slots__ = ("q", "rad", "e")

    def __init__(self, q=0, rad: int = 1, e: int = 0):
        q = Fraction(q)
        if rad != 1:
            k, rad = _squarefree_split(rad)
            q *= k
        if q == 0:
            rad, e = 1, 0
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "rad", rad)
        object.__setattr__(self, "e", e)

    def __setattr__(self, name, value):
        raise AttributeError("ExactValue is immutable")

    def __reduce__(self):
        return (ExactValue, (self.q, self.rad, self.e))

    # -- predicates -------------------------------------------------------
    @property
    def is_rational(self) -> bool:
        return self.rad == 1 and self.e == 0

    @property
    def tag(self) -> tuple[int, int]:
        return (self.rad, self.e)

    def is_zero(self) -> bool:
        return self.q == 0

    def as_fraction(self) -> Fraction:
        if not self.is_rational:
            raise TypeError(f"{self} is not rational")
        return self.q

    def sign(self) -> int:
        return (self.q > 0) - (self.q < 0)

    # -- arithmetic -------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, ExactValue):
            return other
        if isinstance(other, (int, Rational)):
            return ExactValue(other)
        return NotImplemented

    def __add__(self, other):
        if isinstance(other, ApproxValue) or isinstance(other, float):
            return ApproxValue.of(self) + other
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o.q == 0:
            return self
        if self.q == 0:
            return o
        if self.tag != o.tag:
            raise MixedRadicalError(f"cannot add {self} and {o}")
        return ExactValue(self.q + o.q, self.rad, self.e)

    __radd__ = __add__

    def __neg__(self):
        return ExactValue(-self.q, self.rad, self.e)

    def __pos__(self):
        return self

    def __abs__(self):
        return ExactValue(abs(self.q), self.rad, self.e)

    def __sub__(self, other):
        if isinstance(other, (ApproxValue, float)):
            return ApproxValue.of(self) - other
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (ApproxValue, float)):
            return ApproxValue.of(self) * other
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        g = math.gcd(self.rad, o.rad)
        return ExactValue(self.q * o.q * g, (self.rad // g) * (o.rad // g), self.e + o.e)

    __rmul__ = __mul__

    def inverse(self) -> "ExactValue":
        if self.q == 0:
            raise ZeroDivisionError("division by exact zero")
        return ExactValue(1 / (self.q * self.rad), self.rad, -self.e)

    def __truediv__(self, other):
        if isinstance(other, (ApproxValue, float)):
            return ApproxValue.of(self) / other
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        if isinstance(other, (ApproxValue, float)):
            return ApproxValue.of(other) / self
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inverse()

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return self.inverse() ** (-n)
        out = ExactValue(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    # -- comparison / conversion -------------------------------------------
    def __eq__(self, other):
        if isinstance(other, ExactValue):
            return (self.q, self.rad, self.e) == (other.q, other.rad, other.e)
        if isinstance(other, (int, Rational)):
            return self.is_rational and self.q == other
        return NotImplemented

    def __hash__(self):
        if self.is_rational:
            return hash(self.q)
        return hash((self.q, self.rad, self.e))

    def _cmp_key(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return float(self), float(other)
        if self.tag == o.tag:
            return self.q, o.q
        return float(self), float(o)

    def __lt__(self, other):
        a, b = self._cmp_key(other)
        return a < b

    def __le__(self, other):
        a, b = self._cmp_key(other)
        return a <= b

    def __gt__(self, other):
        a, b = self._cmp_key(other)
        return a > b

    def __ge__(self, other):
        a, b = self._cmp_key(other)
        return a >= b

    def __float__(self):
        v = float(self.q)
        if self.rad != 1:
            v *= math.sqrt(self.rad)
        if self.e:
            v *= math.pi ** (self.e / 2)
        return v

    def __bool__(self):
        return self.q != 0

    def __repr__(self):
        return f"ExactValue({format_scalar(self)!r})"

    def __str__(self):
        return format_scalar(self)


class ApproxValue:
    """Double-precision value with a propagated absolute error bound."""

    __slots__ = ("value", "abserr")

    def __init__(self, value: float, abserr: float = 0.0):
        object.__setattr__(self, "value", float(value))
        object.__setattr__(self, "abserr", abs(float(abserr)))

    def __setattr__(self, name, value):
        raise AttributeError("ApproxValue is immutable")

    def __reduce__(self):
        return (ApproxValue, (self.value, self.abserr))

    @classmethod
    def of(cls, x) -> "ApproxValue":
        if isinstance(x, ApproxValue):
            return x
        if isinstance(x, float):
            return cls(x, EPS * abs(x))
        v = float(x)
        # conversion of an exact value costs one rounding (a few for radicals)
        return cls(v, 4 * EPS * abs(v))

    @classmethod
    def with_rel(cls, value: float, rel: float) -> "ApproxValue":
        return cls(value, abs(value) * rel)

    @property
    def rel(self) -> float:
        if self.value == 0:
            return 0.0 if self.abserr == 0 else math.inf
        return self.abserr / abs(self.value)

    def __add__(self, other):
        o = ApproxValue.of(other)
        v = self.value + o.value
        return ApproxValue(v, self.abserr + o.abserr + EPS * abs(v))

    __radd__ = __add__

    def __neg__(self):
        return ApproxValue(-self.value, self.abserr)

    def __pos__(self):
        return self

    def __abs__(self):
        return ApproxValue(abs(self.value), self.abserr)

    def __sub__(self, other):
        return self + (-ApproxValue.of(other))

    def __rsub__(self, other):
        return ApproxValue.of(other) - self

    def __mul__(self, other):
        o = ApproxValue.of(other)
        v = self.value * o.value
        err = abs(o.value) * self.abserr + abs(self.value) * o.abserr + self.abserr * o.abserr
        return ApproxValue(v, err + EPS * abs(v))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = ApproxValue.of(other)
        if o.value == 0:
            raise ZeroDivisionError("division by approximate zero")
        if o.abserr >= abs(o.value):
            raise ZeroDivisionError("divisor error budget covers zero")
        v = self.value / o.value
        r = self.rel if self.value != 0 else 0.0
        rel = r + o.rel + r * o.rel
        err = abs(v) * rel if self.value != 0 else self.abserr / (abs(o.value) - o.abserr)
        return ApproxValue(v, err + EPS * abs(v))

    def __rtruediv__(self, other):
        return ApproxValue.of(other) / self

    def __pow__(self, n):
        if not isinstance(n, int):
            return NotImplemented
        if n < 0:
            return ApproxValue(1.0) / (self ** (-n))
        out = ApproxValue(1.0)
        for _ in range(n):
            out = out * self
        return out

    def __float__(self):
        return self.value

    def __bool__(self):
        return self.value != 0 or self.abserr != 0

    def __eq__(self, other):
        if isinstance(other, ApproxValue):
            return self.value == other.value and self.abserr == other.abserr
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.abserr))

    def __lt__(self, other):
        return self.value < float(other)

    def __gt__(self, other):
        return self.value > float(other)

    def __le__(self, other):
        return self.value <= float(other)

    def __ge__(self, other):
        return self.value >= float(other)

    def sign(self) -> int:
        return (self.value > 0) - (self.value < 0)

    def is_zero(self) -> bool:
        return self.value == 0 and self.abserr == 0

    def agrees_with(self, other, extra_rel: float = 0.0) -> bool:
        """True when ``other`` lies inside this value's error budget."""
        o = ApproxValue.of(other)
        tol = self.abserr + o.abserr + extra_rel * max(abs(self.value), abs(o.value))
        return abs(self.value - o.value) <= tol

    def __repr__(self):
        return f"ApproxValue({format_scalar(self)!r})"

    def __str__(self):
        return format_scalar(self)


Scalar = Union[ExactValue, ApproxValue]

ONE = ExactValue(1)
ZERO = ExactValue(0)
SQRT_PI = ExactValue(1, 1, 1)


def to_scalar(x) -> Scalar:
    """Coerce ints, Fractions, floats, strings and scalars to a Scalar."""
    if isinstance(x, (ExactValue, ApproxValue)):
        return x
    if isinstance(x, bool):
        raise TypeError("bool is not a scalar")
    if isinstance(x, (int, Rational)):
        return ExactValue(x)
    if isinstance(x, float):
        return ApproxValue.of(x)
    if isinstance(x, str):
        return parse_scalar(x)
    raise TypeError(f"cannot convert {type(x).__name__} to a scalar")


def rational_of(x) -> Fraction | None:
    """The Fraction behind ``x`` when it is exactly rational, else None."""
    if isinstance(x, bool):
        return None
    if isinstance(x, (int, Rational)):
        return Fraction(x)
    if isinstance(x, ExactValue) and x.is_rational:
        return x.q
    return None


def is_exact(x) -> bool:
    return not isinstance(x, (ApproxValue, float))


def _as_number(x):
    """Fraction when possible, else a scalar (for float-path arithmetic)."""
    r = rational_of(x)
    return r if r is not None else to_scalar(x)


def _wrap(x) -> Scalar:
    if isinstance(x, (ExactValue, ApproxValue)):
        return x
    return ExactValue(x)


# ---------------------------------------------------------------------------
# Special functions on the half-integer lattice
# ---------------------------------------------------------------------------

def pochhammer(a, n: int) -> Scalar:
    """Rising factorial ``(a)_n = a (a+1) ... (a+n-1)``; exact on exact input."""
    if n < 0:
        raise ValueError("pochhammer order must be nonnegative")
    a = _as_number(a)
    out = Fraction(1) if isinstance(a, Fraction) else ONE
    for k in range(n):
        out = out * (a + k)
    return _wrap(out)


def half_lattice(x) -> Fraction | None:
    """``x`` as a Fraction when it lies on Z or Z + 1/2, otherwise None."""
    r = rational_of(x)
    if r is not None and r.denominator in (1, 2):
        return r
    return None


def _gamma_half(r: Fraction) -> ExactValue:
    if r.denominator == 1:
        if r <= 0:
            raise PoleError(f"Gamma pole at {r}")
        return ExactValue(math.factorial(int(r) - 1))
    n = int(r - Fraction(1, 2))  # r = n + 1/2
    if n >= 0:
        return ExactValue(Fraction(math.factorial(2 * n), 4 ** n * math.factorial(n)), 1, 1)
    k = -n  # Gamma(1/2 - k) = (-4)^k k! / (2k)! sqrt(pi)
    return ExactValue(Fraction((-4) ** k * math.factorial(k), math.factorial(2 * k)), 1, 1)


def gamma_float(x) -> ApproxValue:
    """Gamma on the float path (any real x off the poles)."""
    xf = float(x)
    if xf <= 0 and xf == int(xf):
        raise PoleError(f"Gamma pole at {x}")
    try:
        v = math.gamma(xf)
    except OverflowError:
        raise PreconditionError(f"Gamma({xf}) overflows double precision") from None
    # argument rounding contributes |x psi(x)| * eps
    arg_term = abs(xf) * (abs(math.log(abs(xf))) + 1.0) * EPS if xf != 0 else 0.0
    rel = GAMMA_REL + arg_term
    if isinstance(x, ApproxValue) and x.abserr:
        rel += x.abserr * (abs(_digamma(xf)) + 1.0)
    return ApproxValue.with_rel(v, rel)


def gamma_lattice(x, exact: bool = True) -> Scalar:
    """Gamma function.

    Exact on the lattice Z U (Z + 1/2) (half-integers carry one sqrt(pi));
    float otherwise, or when ``exact`` is False. Raises PoleError at the
    nonpositive integers.
    """
    r = half_lattice(x)
    if r is not None and exact:
        return _gamma_half(r)
    if r is not None and r.denominator == 1 and r <= 0:
        raise PoleError(f"Gamma pole at {r}")
    rr = rational_of(x)
    if rr is None and isinstance(x, ExactValue):
        raise PreconditionError(f"Gamma of irrational exact value {x} is unsupported")
    return gamma_float(x)


def rgamma_lattice(x, exact: bool = True) -> Scalar:
    """Reciprocal Gamma, equal to zero at the poles."""
    r = rational_of(x)
    if r is not None and r.denominator == 1 and r <= 0:
        return ZERO
    g = gamma_lattice(x, exact)
    return ONE / g


def gamma_ratio(a, b) -> Scalar:
    """``Gamma(a) / Gamma(b)``.

    When ``a - b`` is an integer the ratio is a Pochhammer symbol, which stays
    rational for any rational ``a`` and avoids spurious poles and sqrt(pi)
    factors. A pole of the numerator raises; a pole of the denominator gives 0.
    """
    ra, rb = rational_of(a), rational_of(b)
    if ra is not None and rb is not None and (ra - rb).denominator == 1:
        d = int(ra - rb)
        if rb.denominator == 1 and rb <= 0:
            if ra.denominator == 1 and ra <= 0:
                # both at poles: limit of Gamma(-p+e)/Gamma(-q+e) is (-1)^(p-q) q!/p!
                p, q = int(-ra), int(-rb)
                return ExactValue(Fraction((-1) ** (p - q) * math.factorial(q), math.factorial(p)))
            return ZERO
        if ra.denominator == 1 and ra <= 0:
            raise PoleError(f"Gamma pole at {ra}")
        if d >= 0:
            return pochhammer(rb, d)
        return ONE / pochhammer(ra, -d)
    return gamma_lattice(a) * rgamma_lattice(b)


def gen_binomial(x, k: int) -> Scalar:
    """Generalized binomial ``x (x-1) ... (x-k+1) / k!`` (product form)."""
    if k < 0:
        return ZERO
    x = _as_number(x)
    out = Fraction(1) if isinstance(x, Fraction) else ONE
    for i in range(k):
        out = out * (x - i)
    return _wrap(out / math.factorial(k))


def _digamma(x: float) -> float:
    return float(mpmath.digamma(x))


def harmonic_general(x) -> Scalar:
    """Harmonic number ``H_x``; exact sum for integers, ``psi(x+1)+gamma_E`` else."""
    r = rational_of(x)
    if r is not None and r.denominator == 1:
        n = int(r)
        if n < 0:
            raise PoleError(f"harmonic number pole at {n}")
        return ExactValue(sum((Fraction(1, i) for i in range(1, n + 1)), Fraction(0)))
    xf = float(x)
    if xf <= -1:
        if xf == int(xf):
            raise PoleError(f"harmonic number pole at {x}")
        raise PreconditionError("harmonic_general requires x > -1")
    v = _digamma(xf + 1.0) + EULER_GAMMA
    return ApproxValue(v, 8 * EPS * (abs(v) + 1.0))


def rational_power(base, exponent) -> Scalar:
    """``base ** exponent`` for rational base > 0.

    Exact when the exponent is an integer or a half-integer; float otherwise.
    """
    b = rational_of(base)
    p = rational_of(exponent)
    if b is not None and p is not None:
        if b <= 0:
            if b == 0 and p > 0:
                return ZERO
            if p.denominator == 1:
                return ExactValue(b) ** int(p)
            raise PreconditionError("rational_power needs a positive base")
        if p.denominator == 1:
            return ExactValue(b ** int(p))
        if p.denominator == 2:
            whole = (p.numerator - 1) // 2  # p = whole + 1/2
            root = ExactValue(Fraction(1, b.denominator), b.numerator * b.denominator)
            return ExactValue(b) ** whole * root
    bf, pf = float(base), float(exponent)
    if bf <= 0:
        raise PreconditionError("rational_power needs a positive base")
    v = bf ** pf
    rel = (abs(pf * math.log(bf)) + 2.0) * EPS
    if isinstance(base, ApproxValue):
        rel += abs(pf) * base.rel
    if isinstance(exponent, ApproxValue):
        rel += abs(math.log(bf)) * exponent.abserr
    return ApproxValue.with_rel(v, rel)


# ---------------------------------------------------------------------------
# Serialization
# ---------------------------------------------------------------------------

def _pi_factor(e: int) -> str:
    if e == 1:
        return "sqrt(pi)"
    if e == 2:
        return "pi"
    if e % 2 == 0:
        return f"pi^{e // 2}"
    return f"pi^({e}/2)"


def format_scalar(x) -> str:
    """Serialize: ``"p/q"``, ``"p/q*sqrt(r)*sqrt(pi)"`` or ``"<decimal> ±rel <budget>"``."""
    if isinstance(x, ApproxValue):
        return f"{x.value!r} ±rel {x.rel:.3e}"
    x = to_scalar(x)
    factors = []
    if x.rad != 1:
        factors.append(f"sqrt({x.rad})")
    if x.e:
        factors.append(_pi_factor(x.e))
    if not factors:
        return str(x.q)
    if x.q == 1:
        return "*".join(factors)
    if x.q == -1:
        return "-" + "*".join(factors)
    return "*".join([str(x.q)] + factors)


_APPROX_RE = re.compile(r"^\s*(\S+)\s*±rel\s*(\S+)\s*$")
_PI_RE = re.compile(r"^pi(?:\^(?:(-?\d+)|\((-?\d+)/2\)))?$")


def parse_scalar(text: str) -> Scalar:
    """Inverse of :func:`format_scalar`."""
    m = _APPROX_RE.match(text)
    if m:
        v, rel = float(m.group(1)), float(m.group(2))
        return ApproxValue.with_rel(v, rel)
    s = text.strip().replace(" ", "")
    sign = 1
    if s.startswith("-") and not s[1:2].isdigit():
        sign, s = -1, s[1:]
    q, rad, e = Fraction(sign), 1, 0
    for part in s.split("*"):
        if part == "sqrt(pi)":
            e += 1
        elif part.startswith("sqrt(") and part.endswith(")"):
            rad *= int(part[5:-1])
        elif _PI_RE.match(part):
            mm = _PI_RE.match(part)
            if mm.group(1) is not None:
                e += 2 * int(mm.group(1))
            elif mm.group(2) is not None:
                e += int(mm.group(2))
            else:
                e += 2
        else:
            try:
                q *= Fraction(part)
            except ValueError:
                raise ValueError(f"cannot parse scalar {text!r}") from None
    return ExactValue(q, rad, e)
