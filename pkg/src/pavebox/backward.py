"""Backward (inverse) contraction rules for the primitive operators.

Each rule takes the enclosure ``y`` of an operation result plus the
operand enclosures and shrinks the operands to the values consistent with
``op(operands) in y``.  Rules never exclude a consistent real tuple
(projections are outward-rounded) and signal infeasibility by returning
an empty pair (lo > hi).

The float-pair layer mirrors the forward kernel in :mod:`pavebox.interval`
and is what the compiled HC4 sweep calls; the ``Interval``-level wrappers
at the bottom are the friendly API.
"""

from __future__ import annotations

import math
from math import inf, nextafter
from typing import Optional, Tuple

from .interval import (
    EMPTY,
    HALF_PI_HI,
    HALF_PI_LO,
    Interval,
    PI_HI,
    PI_LO,
    TWO_PI_HI,
    TWO_PI_LO,
    _dn,
    _dn2,
    _up,
    _up2,
    add_lh,
    div_extended_lh,
    mul_lh,
    sqrt_lh,
    sub_lh,
)

Pair = Tuple[float, float]
_EMPTY_PAIR: Pair = (inf, -inf)


def _isect(al: float, ah: float, bl: float, bh: float) -> Pair:
    lo = al if al >= bl else bl
    hi = ah if ah <= bh else bh
    return (lo, hi) if lo <= hi else _EMPTY_PAIR


def _isect_hull_pieces(
    al: float,
    ah: float,
    p1: Optional[Pair],
    p2: Optional[Pair],
) -> Pair:
    """(a intersect p1) hull (a intersect p2); None pieces are empty."""
    lo, hi = inf, -inf
    if p1 is not None:
        l = al if al >= p1[0] else p1[0]
        h = ah if ah <= p1[1] else p1[1]
        if l <= h:
            lo, hi = l, h
    if p2 is not None:
        l = al if al >= p2[0] else p2[0]
        h = ah if ah <= p2[1] else p2[1]
        if l <= h:
            if l < lo:
                lo = l
            if h > hi:
                hi = h
    return (lo, hi) if lo <= hi else _EMPTY_PAIR


# ---------------------------------------------------------------------------
# binary rules: return (new_a, new_b) as float pairs
# ---------------------------------------------------------------------------


def bwd_add_lh(y: Pair, a: Pair, b: Pair) -> Tuple[Pair, Pair]:
    # a + b in y  =>  a in y - b, b in y - a
    na = _isect(*a, *sub_lh(*y, *b))
    if na[0] > na[1]:
        return _EMPTY_PAIR, _EMPTY_PAIR
    nb = _isect(*b, *sub_lh(*y, *na))
    if nb[0] > nb[1]:
        return _EMPTY_PAIR, _EMPTY_PAIR
    return na, nb


def bwd_sub_lh(y: Pair, a: Pair, b: Pair) -> Tuple[Pair, Pair]:
    # a - b in y  =>  a in y + b, b in a - y
    na = _isect(*a, *add_lh(*y, *b))
    if na[0] > na[1]:
        return _EMPTY_PAIR, _EMPTY_PAIR
    nb = _isect(*b, *sub_lh(*na, *y))
    if nb[0] > nb[1]:
        return _EMPTY_PAIR, _EMPTY_PAIR
    return na, nb


def bwd_mul_lh(y: Pair, a: Pair, b: Pair) -> Tuple[Pair, Pair]:
    # a * b in y.  a in y/b unless (0 in y and 0 in b) allows anything.
    if not (b[0] <= 0.0 <= b[1] and y[0] <= 0.0 <= y[1]):
        p1, p2 = div_extended_lh(*y, *b)
        na = _isect_hull_pieces(*a, p1, p2)
        if na[0] > na[1]:
            return _EMPTY_PAIR, _EMPTY_PAIR
    else:
        na = a
    if not (na[0] <= 0.0 <= na[1] and y[0] <= 0.0 <= y[1]):
        p1, p2 = div_extended_lh(*y, *na)
        nb = _isect_hull_pieces(*b, p1, p2)
        if nb[0] > nb[1]:
            return _EMPTY_PAIR, _EMPTY_PAIR
    else:
        nb = b
    return na, nb


def bwd_div_lh(y: Pair, a: Pair, b: Pair) -> Tuple[Pair, Pair]:
    # a / b in y  =>  a in y * b;  b in a / y (b = a/y when y != 0)
    na = _isect(*a, *mul_lh(*y, *b))
    if na[0] > na[1]:
        return _EMPTY_PAIR, _EMPTY_PAIR
    if not (y[0] <= 0.0 <= y[1] and na[0] <= 0.0 <= na[1]):
        p1, p2 = div_extended_lh(*na, *y)
        nb = _isect_hull_pieces(*b, p1, p2)
        if nb[0] > nb[1]:
            return _EMPTY_PAIR, _EMPTY_PAIR
    else:
        nb = b
    return na, nb


# ---------------------------------------------------------------------------
# unary rules: return the new operand pair
# ---------------------------------------------------------------------------


def bwd_neg_lh(y: Pair, a: Pair) -> Pair:
    return _isect(*a, -y[1], -y[0])


def bwd_sqr_lh(y: Pair, a: Pair) -> Pair:
    yl = max(y[0], 0.0)
    if yl > y[1]:
        return _EMPTY_PAIR
    rl, rh = sqrt_lh(yl, y[1])
    return _isect_hull_pieces(*a, (-rh, -rl), (rl, rh))


def bwd_exp_lh(y: Pair, a: Pair) -> Pair:
    if y[1] <= 0.0:
        return _EMPTY_PAIR  # exp is strictly positive
    lo = -inf if y[0] <= 0.0 else _dn2(math.log(y[0]))
    hi = inf if y[1] == inf else _up2(math.log(y[1]))
    return _isect(*a, lo, hi)


def _ipow(x: float, k: int) -> float:
    try:
        return x**k
    except OverflowError:
        return inf if (x > 0.0 or k % 2 == 0) else -inf


def _root_hi(t: float, k: int) -> float:
    """Verified upper bound on t**(1/k), t >= 0: result**k >= t for sure."""
    if t == 0.0 or t == inf:
        return t
    r = _up2(t ** (1.0 / k))
    for _ in range(100):
        if _dn2(_ipow(r, k)) >= t:
            return r
        r = _up2(r * (1.0 + 4e-16))
    return inf


def _root_lo(t: float, k: int) -> float:
    """Verified lower bound on t**(1/k), t >= 0: result**k <= t for sure."""
    if t == 0.0:
        return 0.0
    if t == inf:
        return _dn2(inf)
    r = _dn2(t ** (1.0 / k))
    for _ in range(100):
        if r <= 0.0:
            return 0.0
        if _up2(_ipow(r, k)) <= t:
            return r
        r = _dn2(r * (1.0 - 4e-16))
    return 0.0


def _signed_root_lo(t: float, k: int) -> float:
    # lower bound of the odd root of t over the reals
    if t >= 0.0:
        return _root_lo(t, k)
    return -_root_hi(-t, k)


def _signed_root_hi(t: float, k: int) -> float:
    if t >= 0.0:
        return _root_hi(t, k)
    return -_root_lo(-t, k)


def bwd_pow_lh(y: Pair, a: Pair, k: int) -> Pair:
    if k == 0:
        return a if y[0] <= 1.0 <= y[1] else _EMPTY_PAIR
    if k == 1:
        return _isect(*a, *y)
    if k == 2:
        return bwd_sqr_lh(y, a)
    if k % 2 == 0:
        yl = max(y[0], 0.0)
        if yl > y[1]:
            return _EMPTY_PAIR
        rl = _root_lo(yl, k)
        rh = inf if y[1] == inf else _root_hi(y[1], k)
        return _isect_hull_pieces(*a, (-rh, -rl), (rl, rh))
    # odd power: monotone signed root
    if y[0] == -inf and y[1] == inf:
        return a
    lo = -inf if y[0] == -inf else _signed_root_lo(y[0], k)
    hi = inf if y[1] == inf else _signed_root_hi(y[1], k)
    return _isect(*a, lo, hi)


def _trig_pieces(a: Pair, base_lo: float, base_hi: float, alt_lo: float, alt_hi: float) -> Pair:
    """Hull of a intersected with {base + 2k*pi} u {alt + 2k*pi} pieces.

    base/alt are rigorous sub-period solution bands.  Gives up (returns a)
    when a spans so many periods that no contraction is possible.
    """
    al, ah = a
    if math.isinf(al) or math.isinf(ah):
        return a
    # candidate period indices: k with base + 2k*pi near [al, ah]
    k_min = math.floor((al - base_hi) / TWO_PI_LO) - 1
    k_max = math.ceil((ah - base_lo) / TWO_PI_LO) + 1
    if k_max - k_min > 64:
        return a
    lo, hi = inf, -inf
    for k in range(k_min, k_max + 1):
        tl, th = mul_lh(float(k), float(k), TWO_PI_LO, TWO_PI_HI)
        for pl, ph in ((base_lo, base_hi), (alt_lo, alt_hi)):
            sl, sh = add_lh(pl, ph, tl, th)
            l = al if al >= sl else sl
            h = ah if ah <= sh else sh
            if l <= h:
                if l < lo:
                    lo = l
                if h > hi:
                    hi = h
    return (lo, hi) if lo <= hi else _EMPTY_PAIR


def bwd_sin_lh(y: Pair, a: Pair) -> Pair:
    yl = max(y[0], -1.0)
    yh = min(y[1], 1.0)
    if yl > yh:
        return _EMPTY_PAIR
    # alpha = asin([yl, yh]) in [-pi/2, pi/2]; solutions are
    # alpha + 2k*pi and (pi - alpha) + 2k*pi
    alo = _dn2(math.asin(yl))
    ahi = _up2(math.asin(yh))
    alo = max(alo, -HALF_PI_HI)
    ahi = min(ahi, HALF_PI_HI)
    ref_lo, ref_hi = sub_lh(PI_LO, PI_HI, alo, ahi)  # pi - alpha
    return _trig_pieces(a, alo, ahi, ref_lo, ref_hi)


def bwd_cos_lh(y: Pair, a: Pair) -> Pair:
    yl = max(y[0], -1.0)
    yh = min(y[1], 1.0)
    if yl > yh:
        return _EMPTY_PAIR
    # alpha = acos([yl, yh]) in [0, pi] (acos decreasing); solutions are
    # +-alpha + 2k*pi
    alo = _dn2(math.acos(yh))
    ahi = _up2(math.acos(yl))
    alo = max(alo, 0.0)
    ahi = min(ahi, PI_HI)
    return _trig_pieces(a, alo, ahi, -ahi, -alo)


# ---------------------------------------------------------------------------
# Interval-level API
# ---------------------------------------------------------------------------


def _pair(iv: Interval) -> Pair:
    return (iv.lo, iv.hi)


def backward_binary(
    op: str, y: Interval, a: Interval, b: Interval
) -> Tuple[Interval, Interval]:
    """Contract (a, b) against op(a, b) in y; EMPTY means infeasible."""
    if y.is_empty or a.is_empty or b.is_empty:
        return EMPTY, EMPTY
    if op == "add":
        na, nb = bwd_add_lh(_pair(y), _pair(a), _pair(b))
    elif op == "sub":
        na, nb = bwd_sub_lh(_pair(y), _pair(a), _pair(b))
    elif op == "mul":
        na, nb = bwd_mul_lh(_pair(y), _pair(a), _pair(b))
    elif op == "div":
        na, nb = bwd_div_lh(_pair(y), _pair(a), _pair(b))
    else:
        raise ValueError(f"unknown binary op {op!r}")
    return Interval.from_pair(na), Interval.from_pair(nb)


def backward_unary(op: str, y: Interval, a: Interval, k: int = 0) -> Interval:
    """Contract a against op(a) in y; EMPTY means infeasible."""
    if y.is_empty or a.is_empty:
        return EMPTY
    if op == "neg":
        na = bwd_neg_lh(_pair(y), _pair(a))
    elif op == "sqr":
        na = bwd_sqr_lh(_pair(y), _pair(a))
    elif op == "exp":
        na = bwd_exp_lh(_pair(y), _pair(a))
    elif op == "sin":
        na = bwd_sin_lh(_pair(y), _pair(a))
    elif op == "cos":
        na = bwd_cos_lh(_pair(y), _pair(a))
    elif op == "pow":
        na = bwd_pow_lh(_pair(y), _pair(a), k)
    else:
        raise ValueError(f"unknown unary op {op!r}")
    return Interval.from_pair(na)
