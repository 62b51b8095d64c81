"""Hardy's Z function on the critical line.

Two evaluators cover the desk-scale range:

* Euler-Maclaurin summation of zeta(1/2 + it) below ``RS_MIN_T`` (exact to
  roughly 1e-12 there, cost grows linearly in t);
* the Riemann-Siegel main sum with the C_0..C_4 correction terms above it
  (roughly 1e-11 from t = 1000 upward).
"""

from __future__ import annotations

import warnings
from functools import lru_cache

import mpmath
import numpy as np

from .. import kernels
from .theta import theta

RS_MIN_T = 1000.0
DEFAULT_CEILING = 1e5

_EM_TERMS = 14
_EM_EXTRA = 10
_RS_DEGREE = 52


class HeightCeilingWarning(UserWarning):
    """Z evaluated above the configured height ceiling; accuracy not guaranteed."""


@lru_cache(maxsize=1)
def rs_coefficients() -> np.ndarray:
    """Taylor coefficients of C_0..C_4 in powers of (p - 1/2).

    C_0 = Psi = cos(2 pi (p^2 - p - 1/16)) / cos(2 pi p) is entire, so its
    series is obtained by dividing the two cosine series exactly.
    """
    D = _RS_DEGREE + 16
    with mpmath.workdps(120):
        pi = mpmath.pi
        c5, s5 = mpmath.cos(5 * pi / 8), mpmath.sin(5 * pi / 8)
        num = [mpmath.mpf(0)] * (D + 1)
        den = [mpmath.mpf(0)] * (D + 1)
        for k in range(D // 2 + 1):
            # cos(2 pi x^2 - 5 pi / 8) with x = p - 1/2
            term = (2 * pi) ** k / mpmath.factorial(k)
            if k % 2 == 0:
                num[2 * k] += c5 * term * (-1) ** (k // 2)
            else:
                num[2 * k] += s5 * term * (-1) ** ((k - 1) // 2)
            # cos(2 pi p) = -cos(2 pi x)
            den[2 * k] = -((-1) ** k) * (2 * pi) ** (2 * k) / mpmath.factorial(2 * k)
        psi = [mpmath.mpf(0)] * (D + 1)
        for n in range(D + 1):
            acc = num[n] - mpmath.fsum(psi[i] * den[n - i] for i in range(n))
            psi[n] = acc / den[0]

        def d(m):
            return [psi[i + m] * mpmath.factorial(i + m) / mpmath.factorial(i) for i in range(D + 1 - m)]

        def combine(*terms):
            out = [mpmath.mpf(0)] * (_RS_DEGREE + 1)
            for w, c in terms:
                for i in range(_RS_DEGREE + 1):
                    out[i] += w * c[i]
            return out

        P = [d(m) for m in range(13)]
        C = [
            combine((1, P[0])),
            combine((-1 / (96 * pi**2), P[3])),
            combine((1 / (64 * pi**2), P[2]), (1 / (18432 * pi**4), P[6])),
            combine((-1 / (64 * pi**2), P[1]), (-1 / (3840 * pi**4), P[5]),
                    (-1 / (5308416 * pi**6), P[9])),
            combine((1 / (128 * pi**2), P[0]), (mpmath.mpf(19) / (24576 * pi**4), P[4]),
                    (mpmath.mpf(11) / (5898240 * pi**6), P[8]),
                    (1 / (2038431744 * pi**8), P[12])),
        ]
        return np.array([[float(v) for v in row] for row in C])


@lru_cache(maxsize=1)
def _em_bernoulli() -> np.ndarray:
    return np.array([float(mpmath.bernoulli(2 * k) / mpmath.factorial(2 * k))
                     for k in range(1, _EM_TERMS + 1)])


def zeta_half(t):
    """zeta(1/2 + it) by Euler-Maclaurin summation (complex, vectorised)."""
    arr = np.atleast_1d(np.asarray(t, dtype=np.float64))
    out = kernels.em_zeta(np.ascontiguousarray(arr), _em_bernoulli(), _EM_EXTRA)
    if np.ndim(t) == 0:
        return complex(out[0])
    return out


def rotated_zeta(t):
    """exp(i theta(t)) zeta(1/2 + it); its imaginary part measures the error."""
    arr = np.asarray(t, dtype=np.float64)
    return np.exp(1j * theta(np.abs(arr))) * zeta_half(np.abs(arr))


def hardy_Z(t, ceiling: float = DEFAULT_CEILING):
    """Hardy's Z(t), real and even in t; requires |t| >= 1."""
    arr = np.abs(np.atleast_1d(np.asarray(t, dtype=np.float64)))
    if np.any(arr < 1.0):
        raise ValueError("hardy_Z requires |t| >= 1")
    if np.any(arr > ceiling):
        warnings.warn(
            f"Z evaluated at t = {arr.max():.6g} above the height ceiling {ceiling:g}; "
            "accuracy is not guaranteed",
            HeightCeilingWarning,
            stacklevel=2,
        )
    out = np.empty_like(arr)
    low = arr < RS_MIN_T
    if np.any(low):
        tl = np.ascontiguousarray(arr[low])
        out[low] = np.real(np.exp(1j * theta(tl)) * kernels.em_zeta(tl, _em_bernoulli(), _EM_EXTRA))
    if np.any(~low):
        out[~low] = kernels.rs_z(np.ascontiguousarray(arr[~low]), rs_coefficients())
    if np.ndim(t) == 0:
        return float(out[0])
    return out

