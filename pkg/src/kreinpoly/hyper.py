"""Terminating hypergeometric kernels.

Single-variable pFq (2F1, 3F2), the Lauricella function of type A and the
two-row Srivastava-Daoust array ``F^{1:2;...;2}_{1:1;...;1}``. All series
must terminate; summation is a lexicographic walk over the finite box with
running Pochhammer products, so rational inputs give exact rational output.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import NotTerminatingError, PoleError
from .exact import ONE, ExactValue, Scalar, rational_of, to_scalar


def _num(x):
    r = rational_of(x)
    return r if r is not None else to_scalar(x)


def _nonpos_int(x) -> int | None:
    """``-x`` when x is a nonpositive integer, else None."""
    r = rational_of(x)
    if r is not None and r.denominator == 1 and r <= 0:
        return int(-r)
    return None


def _check_denominator(c, top: int, what: str) -> None:
    # (c)_j vanishes for j > -c; j runs up to ``top``
    k = _nonpos_int(c)
    if k is not None and k < top:
        raise PoleError(f"{what} parameter {c} gives a pole inside the summation range 0..{top}")


def _wrap(x) -> Scalar:
    return x if not isinstance(x, (int, Fraction)) else ExactValue(x)


def _ratio_table(num: Sequence, den: Sequence, x, top: int) -> list:
    """``prod (num)_j / prod (den)_j * x^j / j!`` for j = 0..top."""
    out = [Fraction(1) if all(isinstance(v, Fraction) for v in (*num, *den, x)) else ONE]
    cur = out[0]
    for j in range(top):
        f = x / (j + 1)
        for a in num:
            f = f * (a + j)
        for c in den:
            f = f / (c + j)
        cur = cur * f
        out.append(cur)
    return out


def _poch_ratio_table(num, den, top: int) -> list:
    """``(num)_T / (den)_T`` for T = 0..top (den may be None)."""
    exact = isinstance(num, Fraction) and (den is None or isinstance(den, Fraction))
    cur = Fraction(1) if exact else ONE
    out = [cur]
    for t in range(top):
        cur = cur * (num + t)
        if den is not None:
            cur = cur / (den + t)
        out.append(cur)
    return out


def _box_sum(top: list, factors: list[list], order: Sequence[int] | None = None):
    """Sum ``top[|j|] * prod_i factors[i][j_i]`` over the box, lexicographically.

    Returns ``(value, terms_visited)``.
    """
    r = len(factors)
    idx = list(range(r)) if order is None else list(order)
    if sorted(idx) != list(range(r)):
        raise ValueError("order must be a permutation of the variables")
    facs = [factors[i] for i in idx]
    total = [Fraction(0)]
    count = [0]

    def walk(depth: int, prefix, tsum: int):
        if depth == r:
            total[0] = total[0] + top[tsum] * prefix
            count[0] += 1
            return
        for j, u in enumerate(facs[depth]):
            walk(depth + 1, prefix * u, tsum + j)

    walk(0, Fraction(1), 0)
    return total[0], count[0]


# ---------------------------------------------------------------------------
# single-variable series
# ---------------------------------------------------------------------------

def hyp_pfq_terminating(num: Sequence, den: Sequence, x) -> Scalar:
    """Terminating ``pFq(num; den; x)``; one numerator must be a nonpositive integer."""
    num = [_num(a) for a in num]
    den = [_num(c) for c in den]
    x = _num(x)
    bounds = [k for k in (_nonpos_int(a) for a in num) if k is not None]
    if not bounds:
        raise NotTerminatingError(f"no nonpositive-integer numerator among {num}")
    top = min(bounds)
    for c in den:
        _check_denominator(c, top, "denominator")
    table = _ratio_table(num, den, x, top)
    s = table[0]
    for t in table[1:]:
        s = s + t
    return _wrap(s)


def hyp2f1_terminating(a, b, c, x) -> Scalar:
    """Terminating Gauss function ``2F1(a, b; c; x)``."""
    return hyp_pfq_terminating([a, b], [c], x)


def hyp3f2_terminating(a1, a2, a3, b1, b2, x) -> Scalar:
    """Terminating ``3F2(a1, a2, a3; b1, b2; x)``."""
    return hyp_pfq_terminating([a1, a2, a3], [b1, b2], x)


# ---------------------------------------------------------------------------
# multivariate series
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TerminatingSeriesSpec:
    """Parameters of ``F_A^{(r)}(a; b_1..b_r; c_1..c_r; x_1..x_r)``.

    Each ``b_i`` must be a nonpositive integer; the termination bound is
    ``t_i = -b_i``.
    """

    a: object
    b: tuple
    c: tuple
    x: tuple

    def __post_init__(self):
        object.__setattr__(self, "b", tuple(self.b))
        object.__setattr__(self, "c", tuple(self.c))
        object.__setattr__(self, "x", tuple(self.x))
        if not (len(self.b) == len(self.c) == len(self.x)):
            raise ValueError("b, c and x must have equal length")
        for b in self.b:
            if _nonpos_int(b) is None:
                raise NotTerminatingError(f"Lauricella parameter b={b} is not a nonpositive integer")

    @property
    def bounds(self) -> tuple[int, ...]:
        return tuple(_nonpos_int(b) for b in self.b)

    @property
    def box_size(self) -> int:
        return math.prod(t + 1 for t in self.bounds)


def lauricella_fa_terms(spec: TerminatingSeriesSpec, order=None) -> tuple[Scalar, int]:
    """Evaluate ``F_A`` and report the number of box terms visited."""
    bounds = spec.bounds
    factors = []
    for b, c, x, t in zip(spec.b, spec.c, spec.x, bounds):
        c, x = _num(c), _num(x)
        _check_denominator(c, t, "Lauricella denominator")
        factors.append(_ratio_table([_num(b)], [c], x, t))
    top = _poch_ratio_table(_num(spec.a), None, sum(bounds))
    value, count = _box_sum(top, factors, order)
    return _wrap(value), count


def lauricella_fa(spec: TerminatingSeriesSpec) -> Scalar:
    """Terminating Lauricella function of type A."""
    return lauricella_fa_terms(spec)[0]


@dataclass(frozen=True)
class SrivastavaDaoustSpec:
    """Parameters of ``F^{1:2;...;2}_{1:1;...;1}``.

    ``pairs[i] = (a_i1, a_i2)``; one entry of every pair must be a
    nonpositive integer, which fixes the termination bound of variable i.
    """

    a0: object
    pairs: tuple
    b0: object
    b: tuple
    x: tuple

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple(tuple(p) for p in self.pairs))
        object.__setattr__(self, "b", tuple(self.b))
        object.__setattr__(self, "x", tuple(self.x))
        if not (len(self.pairs) == len(self.b) == len(self.x)):
            raise ValueError("pairs, b and x must have equal length")
        self.bounds  # validates termination

    @property
    def bounds(self) -> tuple[int, ...]:
        out = []
        for p in self.pairs:
            ks = [k for k in (_nonpos_int(a) for a in p) if k is not None]
            if not ks:
                raise NotTerminatingError(f"Srivastava-Daoust pair {p} does not terminate")
            out.append(min(ks))
        return tuple(out)

    @property
    def box_size(self) -> int:
        return math.prod(t + 1 for t in self.bounds)


def srivastava_daoust_terms(spec: SrivastavaDaoustSpec, order=None) -> tuple[Scalar, int]:
    bounds = spec.bounds
    factors = []
    for (a1, a2), c, x, t in zip(spec.pairs, spec.b, spec.x, bounds):
        c, x = _num(c), _num(x)
        _check_denominator(c, t, "Srivastava-Daoust denominator")
        factors.append(_ratio_table([_num(a1), _num(a2)], [c], x, t))
    total = sum(bounds)
    b0 = _num(spec.b0)
    _check_denominator(b0, total, "Srivastava-Daoust linked denominator")
    top = _poch_ratio_table(_num(spec.a0), b0, total)
    value, count = _box_sum(top, factors, order)
    return _wrap(value), count


def srivastava_daoust(spec: SrivastavaDaoustSpec) -> Scalar:
    """Terminating two-row Srivastava-Daoust function with linked top/bottom rows."""
    return srivastava_daoust_terms(spec)[0]
