"""Smooth compactly supported test functions with exact derivatives.

Two families are provided.  The canonical bump exp(-1/((u-a)(b-u))) has
derivatives of the form P_k(x) / q^{2k} * B with x = u - (a+b)/2 and
q = (u-a)(b-u); the polynomials P_k are generated once per support by

    P_{k+1} = P_k' q^2 - 2k q q' P_k + q' P_k.

The plateau bump is 1 on [c, d] and ramps smoothly to 0 on [a, c] and
[d, b] through s(x) = sigma(x) / (sigma(x) + sigma(1-x)),
sigma(x) = exp(-1/x); its derivatives come from truncated Taylor arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from numpy.polynomial import Polynomial

from . import kernels
from .errors import DomainError, InputError

MAX_ORDER = 8

CANONICAL = "canonical"
PLATEAU = "plateau"
_KIND_ID = {CANONICAL: 0, PLATEAU: 1}


@dataclass(frozen=True)
class SupportConstant:
    x_b: float


@dataclass(frozen=True)
class BumpFunction:
    """A test function supported on [a, b].

    ``amplitude`` scales the whole function; amplitude 0 gives B = 0, which
    is handy as a degenerate test case.
    """

    a: float
    b: float
    kind: str = CANONICAL
    plateau_flat: tuple[float, float] | None = None
    amplitude: float = 1.0

    def __post_init__(self):
        if not (self.a > 0 and self.b > self.a and math.isfinite(self.b)):
            raise InputError(f"bump support must satisfy 0 < a < b, got [{self.a}, {self.b}]")
        if self.kind not in _KIND_ID:
            raise InputError(f"unknown bump kind {self.kind!r}")
        if self.kind == PLATEAU:
            if self.plateau_flat is None:
                w = (self.b - self.a) / 4.0
                object.__setattr__(self, "plateau_flat", (self.a + w, self.b - w))
            c, d = self.plateau_flat
            if not (self.a < c <= d < self.b):
                raise InputError(f"plateau [{c}, {d}] must lie inside ({self.a}, {self.b})")
            object.__setattr__(self, "plateau_flat", (float(c), float(d)))
        elif self.plateau_flat is not None:
            raise InputError("plateau_flat only applies to the plateau kind")

    @classmethod
    def canonical(cls, a: float = 1.0, b: float = 2.0, amplitude: float = 1.0) -> "BumpFunction":
        return cls(a, b, CANONICAL, None, amplitude)

    @classmethod
    def plateau(cls, a: float = 0.25, c: float = 0.5, d: float = 1.0, b: float = 1.25) -> "BumpFunction":
        return cls(a, b, PLATEAU, (c, d))

    @classmethod
    def parse(cls, text: str, kind: str | None = None) -> "BumpFunction":
        """``"a,b"`` gives a canonical bump, ``"a,b,c,d"`` a plateau bump.

        Plateau endpoints are read in support order, so ``"a,b,c,d"`` means
        support [a, b] with flat part [c, d].
        """
        try:
            vals = [float(Fraction(s.strip())) for s in text.split(",")]
        except (ValueError, ZeroDivisionError):
            raise InputError(f"cannot parse bump {text!r}") from None
        if len(vals) == 2:
            return cls(vals[0], vals[1], kind or CANONICAL)
        if len(vals) == 4:
            return cls(vals[0], vals[1], PLATEAU, (vals[2], vals[3]))
        raise InputError(f"bump needs 2 or 4 numbers, got {text!r}")

    def spec(self) -> str:
        if self.kind == PLATEAU:
            return f"{self.a!r},{self.b!r},{self.plateau_flat[0]!r},{self.plateau_flat[1]!r}"
        return f"{self.a!r},{self.b!r}"

    @property
    def kernel_args(self) -> tuple[int, float, float, float, float]:
        c, d = self.plateau_flat if self.plateau_flat else (0.0, 0.0)
        return _KIND_ID[self.kind], float(self.a), float(self.b), c, d

    @property
    def is_zero(self) -> bool:
        return self.amplitude == 0.0

    def __call__(self, u):
        return self.eval(u)

    def eval(self, u):
        arr = np.atleast_1d(np.asarray(u, dtype=np.float64))
        out = kernels.bump_eval(np.ascontiguousarray(arr), *self.kernel_args)
        if self.amplitude != 1.0:
            out = out * self.amplitude
        return float(out[0]) if np.ndim(u) == 0 else out

    def derivatives(self, u, k: int) -> np.ndarray:
        """Array of shape (k+1, len(u)) holding B, B', ..., B^(k) at u."""
        _check_order(k)
        arr = np.atleast_1d(np.asarray(u, dtype=np.float64))
        if self.kind == CANONICAL:
            out = _canonical_derivs(arr, self.a, self.b, k)
        else:
            out = _plateau_derivs(arr, self.a, self.b, *self.plateau_flat, k)
        if self.amplitude != 1.0:
            out = out * self.amplitude
        return out

    def deriv(self, u, k: int):
        """Exact k-th derivative (k <= 8)."""
        _check_order(k)
        if k == 0:
            return self.eval(u)
        out = self.derivatives(u, k)[k]
        return float(out[0]) if np.ndim(u) == 0 else out

    def support_constant(self) -> SupportConstant:
        return support_constant(self)


def _check_order(k: int) -> None:
    if not (0 <= k <= MAX_ORDER) or int(k) != k:
        raise DomainError(f"derivative order must be an integer in [0, {MAX_ORDER}], got {k}")


def support_constant(bump: BumpFunction) -> SupportConstant:
    """X_B = max(10, 2/a), so that X*a > 1 for every X > X_B."""
    return SupportConstant(max(10.0, 2.0 / bump.a))


@lru_cache(maxsize=64)
def canonical_polynomials(a: float, b: float, k: int) -> tuple[Polynomial, ...]:
    """P_0..P_k in the centred variable x = u - (a+b)/2."""
    h = 0.5 * (b - a)
    q = Polynomial([h * h, 0.0, -1.0])
    dq = q.deriv()
    polys = [Polynomial([1.0])]
    for j in range(k):
        p = polys[-1]
        polys.append(p.deriv() * q * q - 2 * j * q * dq * p + dq * p)
    return tuple(polys)


def _canonical_derivs(u: np.ndarray, a: float, b: float, k: int) -> np.ndarray:
    out = np.zeros((k + 1, u.size))
    inside = (u > a) & (u < b)
    if not np.any(inside):
        return out
    ui = u[inside]
    x = ui - 0.5 * (a + b)
    q = (ui - a) * (b - ui)
    logq = np.log(q)
    polys = canonical_polynomials(float(a), float(b), k)
    for j in range(k + 1):
        out[j, inside] = polys[j](x) * np.exp(-1.0 / q - 2 * j * logq)
    return out


# truncated Taylor series: row n holds f^(n)/n!

def _jet_mul(f, g):
    n = f.shape[0]
    out = np.zeros_like(f)
    for i in range(n):
        out[i] = sum(f[j] * g[i - j] for j in range(i + 1))
    return out


def _jet_div(f, g):
    n = f.shape[0]
    out = np.zeros_like(f)
    for i in range(n):
        acc = f[i] - sum(g[j] * out[i - j] for j in range(1, i + 1))
        out[i] = acc / g[0]
    return out


def _jet_exp(f):
    n = f.shape[0]
    out = np.zeros_like(f)
    out[0] = np.exp(f[0])
    for i in range(1, n):
        out[i] = sum(j * f[j] * out[i - j] for j in range(1, i + 1)) / i
    return out


def _sigma_jet(x, k):
    """Jet of exp(-1/x) for x > 0; set to 0 where it is below ~1e-200."""
    out = np.zeros((k + 1, x.size))
    live = x > 2e-3
    xl = x[live]
    inv = np.empty((k + 1, xl.size))
    for j in range(k + 1):
        inv[j] = -((-1.0) ** j) / xl ** (j + 1)
    out[:, live] = _jet_exp(inv)
    return out


def _step_jet(x, k):
    """Jet of s(x) = sigma(x) / (sigma(x) + sigma(1-x)) for 0 < x < 1."""
    s0 = _sigma_jet(x, k)
    s1 = _sigma_jet(1.0 - x, k)
    s1 = s1 * ((-1.0) ** np.arange(k + 1))[:, None]
    return _jet_div(s0, s0 + s1)


def _plateau_derivs(u, a, b, c, d, k):
    out = np.zeros((k + 1, u.size))
    fact = np.array([math.factorial(j) for j in range(k + 1)], dtype=np.float64)[:, None]
    flat = (u >= c) & (u <= d)
    out[0, flat] = 1.0
    left = (u > a) & (u < c)
    if np.any(left):
        w = c - a
        jet = _step_jet((u[left] - a) / w, k)
        scale = (1.0 / w) ** np.arange(k + 1)
        out[:, left] = jet * fact * scale[:, None]
    right = (u > d) & (u < b)
    if np.any(right):
        w = b - d
        jet = _step_jet((b - u[right]) / w, k)
        scale = (-1.0 / w) ** np.arange(k + 1)
        out[:, right] = jet * fact * scale[:, None]
    return out


def eval_bump(bump: BumpFunction, u):
    return bump.eval(u)


def deriv(bump: BumpFunction, u, k: int):
    return bump.deriv(u, k)
