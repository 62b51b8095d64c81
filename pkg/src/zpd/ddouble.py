"""Double-double arithmetic for large phases.

A value is a pair ``(hi, lo)`` with ``|lo| <= ulp(hi)/2``.  Only what the
phase reductions need is here: exact sums and products of doubles, a
double-double product, and reduction modulo 2*pi.
"""

from __future__ import annotations

import math
from functools import lru_cache

import mpmath

_SPLITTER = 134217729.0  # 2**27 + 1


def two_sum(a: float, b: float) -> tuple[float, float]:
    s = a + b
    bb = s - a
    err = (a - (s - bb)) + (b - bb)
    return s, err


def quick_two_sum(a: float, b: float) -> tuple[float, float]:
    s = a + b
    return s, b - (s - a)


def _split(a: float) -> tuple[float, float]:
    t = _SPLITTER * a
    hi = t - (t - a)
    return hi, a - hi


def two_prod(a: float, b: float) -> tuple[float, float]:
    """Exact product ``a*b = p + e`` (Dekker)."""
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    e = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, e


def dd_add(x: tuple[float, float], y: tuple[float, float]) -> tuple[float, float]:
    s, e = two_sum(x[0], y[0])
    e += x[1] + y[1]
    return quick_two_sum(s, e)


def dd_mul(x: tuple[float, float], y: tuple[float, float]) -> tuple[float, float]:
    p, e = two_prod(x[0], y[0])
    e += x[0] * y[1] + x[1] * y[0]
    return quick_two_sum(p, e)


def dd_from_mpf(v) -> tuple[float, float]:
    hi = float(v)
    lo = float(v - mpmath.mpf(hi))
    return hi, lo


@lru_cache(maxsize=None)
def _two_pi_dd() -> tuple[float, float]:
    with mpmath.workdps(40):
        return dd_from_mpf(2 * mpmath.pi)


@lru_cache(maxsize=4096)
def log_dd(x: float) -> tuple[float, float]:
    """log(x) as a double-double (x is an exact double)."""
    with mpmath.workdps(40):
        return dd_from_mpf(mpmath.log(mpmath.mpf(x)))


def reduce_2pi(x: tuple[float, float]) -> float:
    """Reduce a double-double angle to [-pi, pi) and round to double."""
    tp = _two_pi_dd()
    k = math.floor(x[0] / tp[0] + 0.5)
    if k == 0:
        return x[0] + x[1]
    r = dd_add(x, dd_mul((-float(k), 0.0), tp))
    return r[0] + r[1]


def scaled_phase(gamma: float, factor: tuple[float, float]) -> float:
    """``gamma * factor`` reduced mod 2*pi, carried in double-double."""
    return reduce_2pi(dd_mul((gamma, 0.0), factor))
