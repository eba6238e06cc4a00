"""Rigorous closed-interval arithmetic over IEEE doubles.

Every forward operation returns a superset of the exact real image
(outward rounding contract).  Directed rounding is emulated by stepping
computed endpoints one unit in the last place outward; results of libm
calls (exp, sin, cos, pow, sqrt, log, asin, acos) get two steps to absorb
their last-bit error.  Additions and subtractions use an error-free
transform so exact results stay exact.

Endpoints may be +-inf (rays); ``EMPTY`` is the distinguished empty
interval and absorbs through every operation except ``hull``.

The module has two layers:

* a float-pair kernel (``add_lh``, ``mul_lh``, ...) working on raw
  ``(lo, hi)`` pairs, used by the compiled expression evaluator;
* the ``Interval`` class wrapping the kernel for general use.
"""

from __future__ import annotations

import math
from math import inf, isinf, nextafter
from typing import Optional, Tuple

_MAXF = math.inf  # placeholder, rebound below
_MAXF = nextafter(inf, 0.0)
_TINY = 5e-324  # smallest positive subnormal

# Rigorous enclosure of pi: math.pi rounds pi down.
PI_LO = math.pi
PI_HI = nextafter(math.pi, inf)
TWO_PI_LO = 2.0 * PI_LO
TWO_PI_HI = 2.0 * PI_HI
HALF_PI_LO = 0.5 * PI_LO
HALF_PI_HI = 0.5 * PI_HI


def _dn(x: float) -> float:
    """One ulp toward -inf (clamps +inf overflow to the largest float)."""
    return nextafter(x, -inf)


def _up(x: float) -> float:
    return nextafter(x, inf)


def _dn2(x: float) -> float:
    return nextafter(nextafter(x, -inf), -inf)


def _up2(x: float) -> float:
    return nextafter(nextafter(x, inf), inf)


# ---------------------------------------------------------------------------
# float-pair kernel
#
# All kernel functions assume non-empty operands (lo <= hi, no NaN) and
# return (lo, hi) pairs.  Emptiness is signalled by lo > hi and produced
# only by intersections and backward steps, never by forward arithmetic.
# ---------------------------------------------------------------------------


def sum_lo(a: float, b: float) -> float:
    """Lower bound of a+b: round down unless the float sum is exact."""
    s = a + b
    if isinf(s):
        return nextafter(s, -inf) if s > 0.0 else s
    bb = s - a
    if (a - (s - bb)) + (b - bb) < 0.0:
        return nextafter(s, -inf)
    return s


def sum_hi(a: float, b: float) -> float:
    s = a + b
    if isinf(s):
        return nextafter(s, inf) if s < 0.0 else s
    bb = s - a
    if (a - (s - bb)) + (b - bb) > 0.0:
        return nextafter(s, inf)
    return s


def add_lh(al: float, ah: float, bl: float, bh: float) -> Tuple[float, float]:
    return sum_lo(al, bl), sum_hi(ah, bh)


def sub_lh(al: float, ah: float, bl: float, bh: float) -> Tuple[float, float]:
    return sum_lo(al, -bh), sum_hi(ah, -bl)


def neg_lh(al: float, ah: float) -> Tuple[float, float]:
    return -ah, -al


def _prod(a: float, b: float) -> float:
    # Endpoint product with the interval conventions 0 * inf = 0 (the
    # factor 0 is an exact real) and underflow replaced by a signed
    # subnormal so zero results always mean an exact zero.
    if a == 0.0 or b == 0.0:
        return 0.0
    p = a * b
    if p == 0.0:
        return _TINY if (a > 0.0) == (b > 0.0) else -_TINY
    return p


def mul_lh(al: float, ah: float, bl: float, bh: float) -> Tuple[float, float]:
    p1 = _prod(al, bl)
    p2 = _prod(al, bh)
    p3 = _prod(ah, bl)
    p4 = _prod(ah, bh)
    lo = min(p1, p2, p3, p4)
    hi = max(p1, p2, p3, p4)
    if lo != 0.0:
        lo = nextafter(lo, -inf)
    if hi != 0.0:
        hi = nextafter(hi, inf)
    return lo, hi


def _quot(a: float, b: float) -> float:
    if a == 0.0:
        return 0.0
    q = a / b
    if q == 0.0:
        return _TINY if (a > 0.0) == (b > 0.0) else -_TINY
    return q


def div_lh(al: float, ah: float, bl: float, bh: float) -> Tuple[float, float]:
    """Quotient for 0 not in [bl,bh]; use div_extended_lh otherwise."""
    if bl > 0.0:
        if al >= 0.0:
            lo, hi = _quot(al, bh), _quot(ah, bl)
        elif ah <= 0.0:
            lo, hi = _quot(al, bl), _quot(ah, bh)
        else:
            lo, hi = _quot(al, bl), _quot(ah, bl)
    else:  # bh < 0
        if al >= 0.0:
            lo, hi = _quot(ah, bh), _quot(al, bl)
        elif ah <= 0.0:
            lo, hi = _quot(ah, bl), _quot(al, bh)
        else:
            lo, hi = _quot(ah, bh), _quot(al, bh)
    if lo != 0.0:
        lo = nextafter(lo, -inf)
    if hi != 0.0:
        hi = nextafter(hi, inf)
    return lo, hi


def div_extended_lh(
    al: float, ah: float, bl: float, bh: float
) -> Tuple[Optional[Tuple[float, float]], Optional[Tuple[float, float]]]:
    """Kahan two-piece division {a/b : b != 0}, pieces sorted, None = empty."""
    if bl > 0.0 or bh < 0.0:
        return div_lh(al, ah, bl, bh), None
    if bl == 0.0 and bh == 0.0:
        return None, None  # no nonzero divisor exists
    if al <= 0.0 <= ah:
        return (-inf, inf), None
    if ah < 0.0:
        if bl == 0.0:  # b = [0, bh], quotients in (-inf, ah/bh]
            return (-inf, _up(ah / bh)), None
        if bh == 0.0:
            return (_dn(ah / bl), inf), None
        return (-inf, _up(ah / bh)), (_dn(ah / bl), inf)
    # al > 0
    if bl == 0.0:
        return (_dn(al / bh), inf), None
    if bh == 0.0:
        return (-inf, _up(al / bl)), None
    return (-inf, _up(al / bl)), (_dn(al / bh), inf)


def sqr_lh(al: float, ah: float) -> Tuple[float, float]:
    # range of |a|, then square it
    if al >= 0.0:
        m0, m1 = al, ah
    elif ah <= 0.0:
        m0, m1 = -ah, -al
    else:
        m0, m1 = 0.0, max(-al, ah)
    lo = 0.0 if m0 == 0.0 else max(nextafter(m0 * m0, -inf), 0.0)
    if m1 == 0.0:
        hi = 0.0
    else:
        hi = m1 * m1
        hi = _TINY if hi == 0.0 else nextafter(hi, inf)  # underflow keeps hi > 0
    return lo, hi


def _ipow(x: float, k: int) -> float:
    try:
        return x**k
    except OverflowError:
        return inf if (x > 0.0 or k % 2 == 0) else -inf


def pow_lh(al: float, ah: float, k: int) -> Tuple[float, float]:
    """Integer power, k >= 0."""
    if k == 0:
        return 1.0, 1.0
    if k == 1:
        return al, ah
    if k == 2:
        return sqr_lh(al, ah)
    if k % 2 == 1:
        return _dn2(_ipow(al, k)), _up2(_ipow(ah, k))
    # even power: range of |a|^k
    if al >= 0.0:
        lo, hi = al, ah
    elif ah <= 0.0:
        lo, hi = -ah, -al
    else:
        lo, hi = 0.0, max(-al, ah)
    l = 0.0 if lo == 0.0 else _dn2(_ipow(lo, k))
    h = _up2(_ipow(hi, k))
    return max(l, 0.0), h


def _exp(x: float) -> float:
    try:
        return math.exp(x)
    except OverflowError:
        return inf


def exp_lh(al: float, ah: float) -> Tuple[float, float]:
    lo = max(_dn2(_exp(al)), 0.0)
    hi = _up2(_exp(ah))
    return lo, hi


def _contains_step(al: float, ah: float, offset_lo: float, offset_hi: float) -> bool:
    # Is there an integer k with offset + 2*k*pi in [al, ah]?  The test is
    # done on a rigorous enclosure of (x - offset)/(2 pi), so it can only
    # err toward True (widening the range, which is sound).
    tl, th = sub_lh(al, ah, offset_lo, offset_hi)
    ql, qh = div_lh(tl, th, TWO_PI_LO, TWO_PI_HI)
    return math.floor(qh) >= math.ceil(ql)


def sin_lh(al: float, ah: float) -> Tuple[float, float]:
    if ah - al > 6.3 or isinf(al) or isinf(ah):  # spans a full period
        return -1.0, 1.0
    sa = math.sin(al)
    sb = math.sin(ah)
    lo = _dn2(min(sa, sb))
    hi = _up2(max(sa, sb))
    if _contains_step(al, ah, HALF_PI_LO, HALF_PI_HI):
        hi = 1.0
    if _contains_step(al, ah, -HALF_PI_HI, -HALF_PI_LO):
        lo = -1.0
    return max(lo, -1.0), min(hi, 1.0)


def cos_lh(al: float, ah: float) -> Tuple[float, float]:
    if ah - al > 6.3 or isinf(al) or isinf(ah):
        return -1.0, 1.0
    ca = math.cos(al)
    cb = math.cos(ah)
    lo = _dn2(min(ca, cb))
    hi = _up2(max(ca, cb))
    if _contains_step(al, ah, 0.0, 0.0):
        hi = 1.0
    if _contains_step(al, ah, PI_LO, PI_HI):
        lo = -1.0
    return max(lo, -1.0), min(hi, 1.0)


def sqrt_lh(al: float, ah: float) -> Tuple[float, float]:
    """Square root of the non-negative part; caller clips al >= 0."""
    lo = 0.0 if al <= 0.0 else _dn(math.sqrt(al))
    hi = inf if ah == inf else _up(math.sqrt(ah))
    return max(lo, 0.0), hi


# ---------------------------------------------------------------------------
# Interval
# ---------------------------------------------------------------------------


class Interval:
    """Closed real interval [lo, hi]; endpoints may be +-inf.

    Instances are immutable by convention (attributes are never written
    after __init__), so they are safe to share across workers.
    """

    __slots__ = ("lo", "hi")

    def __init__(self, lo: float, hi: Optional[float] = None):
        if hi is None:
            hi = lo
        lo = float(lo)
        hi = float(hi)
        if math.isnan(lo) or math.isnan(hi):
            raise ValueError("NaN endpoint")
        if lo <= hi and (lo < inf and hi > -inf):
            self.lo = lo
            self.hi = hi
        else:
            # any inverted or infinite-degenerate pair collapses to EMPTY
            self.lo = inf
            self.hi = -inf

    @classmethod
    def _raw(cls, lo: float, hi: float) -> "Interval":
        iv = object.__new__(cls)
        iv.lo = lo
        iv.hi = hi
        return iv

    @classmethod
    def from_pair(cls, pair: Optional[Tuple[float, float]]) -> "Interval":
        if pair is None or pair[0] > pair[1]:
            return EMPTY
        return cls._raw(pair[0], pair[1])

    # -- queries ----------------------------------------------------------

    @property
    def is_empty(self) -> bool:
        return self.lo > self.hi

    @property
    def width(self) -> float:
        return self.hi - self.lo if self.lo <= self.hi else 0.0

    @property
    def mid(self) -> float:
        if self.is_empty:
            raise ValueError("mid of EMPTY interval")
        if self.lo == -inf and self.hi == inf:
            return 0.0
        if self.lo == -inf:
            return -_MAXF
        if self.hi == inf:
            return _MAXF
        m = 0.5 * (self.lo + self.hi)
        if isinf(m):  # huge finite endpoints
            m = 0.5 * self.lo + 0.5 * self.hi
        return m

    @property
    def is_degenerate(self) -> bool:
        return self.lo == self.hi

    def contains(self, x: float) -> bool:
        return self.lo <= x <= self.hi

    def encloses(self, other: "Interval") -> bool:
        """True if other is a subset of self (EMPTY is in everything)."""
        if other.is_empty:
            return True
        return self.lo <= other.lo and other.hi <= self.hi

    def inflated(self, ulps: int = 1) -> "Interval":
        if self.is_empty:
            return self
        lo, hi = self.lo, self.hi
        for _ in range(ulps):
            lo = nextafter(lo, -inf)
            hi = nextafter(hi, inf)
        return Interval._raw(lo, hi)

    # -- lattice ----------------------------------------------------------

    def intersect(self, other: "Interval") -> "Interval":
        lo = self.lo if self.lo >= other.lo else other.lo
        hi = self.hi if self.hi <= other.hi else other.hi
        if lo > hi:
            return EMPTY
        return Interval._raw(lo, hi)

    __and__ = intersect

    def hull(self, other: "Interval") -> "Interval":
        if self.is_empty:
            return other
        if other.is_empty:
            return self
        return Interval._raw(min(self.lo, other.lo), max(self.hi, other.hi))

    __or__ = hull

    # -- arithmetic ---------------------------------------------------------

    def __add__(self, other: "Interval") -> "Interval":
        if self.is_empty or other.is_empty:
            return EMPTY
        return Interval._raw(*add_lh(self.lo, self.hi, other.lo, other.hi))

    def __sub__(self, other: "Interval") -> "Interval":
        if self.is_empty or other.is_empty:
            return EMPTY
        return Interval._raw(*sub_lh(self.lo, self.hi, other.lo, other.hi))

    def __mul__(self, other: "Interval") -> "Interval":
        if self.is_empty or other.is_empty:
            return EMPTY
        return Interval._raw(*mul_lh(self.lo, self.hi, other.lo, other.hi))

    def __truediv__(self, other: "Interval") -> "Interval":
        """Quotient; with 0 in the divisor, the hull of the Kahan pieces."""
        if self.is_empty or other.is_empty:
            return EMPTY
        p1, p2 = div_extended_lh(self.lo, self.hi, other.lo, other.hi)
        a = Interval.from_pair(p1)
        return a.hull(Interval.from_pair(p2))

    def __neg__(self) -> "Interval":
        if self.is_empty:
            return EMPTY
        return Interval._raw(-self.hi, -self.lo)

    def div_extended(self, other: "Interval") -> Tuple["Interval", "Interval"]:
        """Two-piece extended division; second piece may be EMPTY."""
        if self.is_empty or other.is_empty:
            return EMPTY, EMPTY
        p1, p2 = div_extended_lh(self.lo, self.hi, other.lo, other.hi)
        return Interval.from_pair(p1), Interval.from_pair(p2)

    def sqr(self) -> "Interval":
        if self.is_empty:
            return EMPTY
        return Interval._raw(*sqr_lh(self.lo, self.hi))

    def pow_i(self, k: int) -> "Interval":
        if k < 0 or k != int(k):
            raise ValueError("integer exponent k >= 0 required")
        if self.is_empty:
            return EMPTY
        return Interval._raw(*pow_lh(self.lo, self.hi, int(k)))

    def exp(self) -> "Interval":
        if self.is_empty:
            return EMPTY
        return Interval._raw(*exp_lh(self.lo, self.hi))

    def sin(self) -> "Interval":
        if self.is_empty:
            return EMPTY
        return Interval._raw(*sin_lh(self.lo, self.hi))

    def cos(self) -> "Interval":
        if self.is_empty:
            return EMPTY
        return Interval._raw(*cos_lh(self.lo, self.hi))

    # -- misc ---------------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Interval):
            return NotImplemented
        if self.is_empty and other.is_empty:
            return True
        return self.lo == other.lo and self.hi == other.hi

    def __hash__(self) -> int:
        if self.is_empty:
            return hash("empty-interval")
        return hash((self.lo, self.hi))

    def __repr__(self) -> str:
        if self.is_empty:
            return "Interval.EMPTY"
        return f"Interval({self.lo!r}, {self.hi!r})"


EMPTY = Interval._raw(inf, -inf)
Interval.EMPTY = EMPTY  # type: ignore[attr-defined]


def binary_op(op: str, a: Interval, b: Interval) -> Interval:
    """Named forward binary operation (add, sub, mul, div)."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown binary op {op!r}")


def unary_op(op: str, a: Interval, k: int = 0) -> Interval:
    """Named forward unary operation (neg, sqr, exp, sin, cos, pow)."""
    if op == "neg":
        return -a
    if op == "sqr":
        return a.sqr()
    if op == "exp":
        return a.exp()
    if op == "sin":
        return a.sin()
    if op == "cos":
        return a.cos()
    if op == "pow":
        return a.pow_i(k)
    raise ValueError(f"unknown unary op {op!r}")


BINARY_OPS = ("add", "sub", "mul", "div")
UNARY_OPS = ("neg", "sqr", "exp", "sin", "cos", "pow")
