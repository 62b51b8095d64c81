"""The Riemann-Siegel theta function and Gram points."""

from __future__ import annotations

import math

import mpmath
import numpy as np
from scipy.special import lambertw, loggamma

from ..ddouble import dd_from_mpf

# below this height the asymptotic series is replaced by complex log-Gamma
SERIES_MIN_T = 10.0

_LOG_PI = math.log(math.pi)
_TWO_PI_E = 2.0 * math.pi * math.e

# coefficients of t^-1, t^-3, ..., t^-9 in the asymptotic expansion
_TAIL = (1.0 / 48.0, 7.0 / 5760.0, 31.0 / 80640.0, 127.0 / 430080.0, 511.0 / 1216512.0)


def _theta_series(t):
    r = 1.0 / t
    r2 = r * r
    tail = r * (_TAIL[0] + r2 * (_TAIL[1] + r2 * (_TAIL[2] + r2 * (_TAIL[3] + r2 * _TAIL[4]))))
    return 0.5 * t * np.log(t / _TWO_PI_E) - math.pi / 8.0 + tail


def _theta_loggamma(t):
    return np.imag(loggamma(0.25 + 0.5j * t)) - 0.5 * t * _LOG_PI


def theta(t):
    """Riemann-Siegel theta, ``arg Gamma(1/4 + it/2) - (t/2) log pi``.

    Accepts a scalar or an array of positive reals.
    """
    arr = np.asarray(t, dtype=np.float64)
    if np.any(arr <= 0) or np.any(~np.isfinite(arr)):
        raise ValueError("theta is defined here only for finite t > 0")
    out = np.where(arr >= SERIES_MIN_T, _theta_series(np.maximum(arr, SERIES_MIN_T)), 0.0)
    small = arr < SERIES_MIN_T
    if np.any(small):
        out = np.where(small, _theta_loggamma(np.where(small, arr, 1.0)), out)
    if np.ndim(t) == 0:
        return float(out)
    return out


def theta_prime(t):
    arr = np.asarray(t, dtype=np.float64)
    r2 = 1.0 / (arr * arr)
    out = 0.5 * np.log(arr / (2.0 * math.pi)) - r2 * (1.0 / 48.0 + r2 * 7.0 / 1920.0)
    if np.ndim(t) == 0:
        return float(out)
    return out


def theta_dd(t: float) -> tuple[float, float]:
    """theta(t) as a double-double, from 40-digit log-Gamma."""
    if t <= 0:
        raise ValueError("theta is defined here only for t > 0")
    with mpmath.workdps(40):
        tm = mpmath.mpf(t)
        val = mpmath.im(mpmath.loggamma(mpmath.mpf(1) / 4 + 0.5j * tm)) - tm / 2 * mpmath.log(mpmath.pi)
        return dd_from_mpf(val)


def gram_point(n):
    """Gram point g_n, the solution of theta(g_n) = n*pi (n >= -1).

    Vectorised over ``n``.
    """
    nn = np.asarray(n, dtype=np.float64)
    if np.any(nn < -1):
        raise ValueError("Gram points are indexed from -1")
    g = 2.0 * math.pi * np.exp(1.0 + np.real(lambertw((8.0 * nn + 1.0) / (8.0 * math.e))))
    target = nn * math.pi
    for _ in range(40):
        step = (theta(g) - target) / theta_prime(g)
        g = g - step
        if np.all(np.abs(step) <= 1e-15 * g):
            break
    if np.ndim(n) == 0:
        return float(g)
    return g
