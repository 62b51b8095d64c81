"""The operators L F = u F / (u0 - u) and D F = F' acting on expansions.

An expansion is a finite sum

    sum c_{h,i,j} u^h F^{(i)}(u) / (u0 - u)^j

stored as a dict {(h, i, j): c}.  Next to the terms we carry a class label
(A, B, C) meaning h <= A <= j, i + j = h + B and |c| <= C; L sends (A, B, C)
to (A+1, B, C) and D sends it to (A, B+1, (2A+B+1) C).  The integer
coefficients do not depend on u0, which only enters at evaluation time.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .bump import MAX_ORDER, BumpFunction
from .errors import DomainError, InputError


@dataclass(frozen=True)
class OperatorExpansion:
    terms: dict = field(default_factory=dict)
    u0: float = 1.0
    cls: tuple[int, int, int] = (0, 0, 1)

    @classmethod
    def base(cls, u0: float) -> "OperatorExpansion":
        """F itself, in the class (0, 0, 1)."""
        return cls({(0, 0, 0): 1}, float(u0), (0, 0, 1))

    def with_u0(self, u0: float) -> "OperatorExpansion":
        return replace(self, u0=float(u0))

    @property
    def max_derivative(self) -> int:
        return max((i for (_, i, _) in self.terms), default=0)

    def in_class(self) -> bool:
        A, B, C = self.cls
        return all(h <= A <= j and i + j == h + B and abs(c) <= C
                   for (h, i, j), c in self.terms.items())

    def max_coefficient(self):
        return max((abs(c) for c in self.terms.values()), default=0)


def _add(d: dict, key, val) -> None:
    if val:
        d[key] = d.get(key, 0) + val
        if d[key] == 0:
            del d[key]


def apply_L(expr: OperatorExpansion) -> OperatorExpansion:
    out: dict = {}
    for (h, i, j), c in expr.terms.items():
        _add(out, (h + 1, i, j + 1), c)
    A, B, C = expr.cls
    return OperatorExpansion(out, expr.u0, (A + 1, B, C))


def apply_D(expr: OperatorExpansion) -> OperatorExpansion:
    out: dict = {}
    for (h, i, j), c in expr.terms.items():
        if h:
            _add(out, (h - 1, i, j), h * c)       # derivative of u^h
        _add(out, (h, i + 1, j), c)               # derivative of F^(i)
        if j:
            _add(out, (h, i, j + 1), j * c)       # derivative of (u0-u)^-j
    A, B, C = expr.cls
    return OperatorExpansion(out, expr.u0, (A, B + 1, (2 * A + B + 1) * C))


def dl_power(k: int, u0: float, leading_L: bool = False) -> OperatorExpansion:
    """[D L]^k F, or L [D L]^k F when ``leading_L``."""
    if k < 0 or k + leading_L > MAX_ORDER + 1 or k > MAX_ORDER:
        raise DomainError(f"operator power {k} is outside the supported range")
    e = OperatorExpansion.base(u0)
    for _ in range(k):
        e = apply_D(apply_L(e))
    if leading_L:
        e = apply_L(e)
    return e


def _inv_sqrt_derivs(u: np.ndarray, n: int) -> np.ndarray:
    out = np.empty((n + 1, u.size))
    coef = 1.0
    for m in range(n + 1):
        out[m] = coef * u ** (-0.5 - m)
        coef *= -0.5 - m
    return out


def base_derivatives(bump: BumpFunction, u: np.ndarray, n: int, weight: str | None) -> np.ndarray:
    """Derivatives 0..n of F = B (weight None) or F = B / sqrt(u) (weight "sqrt")."""
    Bd = bump.derivatives(u, n)
    if weight is None:
        return Bd
    if weight != "sqrt":
        raise InputError(f"unknown weight {weight!r}")
    W = _inv_sqrt_derivs(u, n)
    out = np.zeros_like(Bd)
    for i in range(n + 1):
        for r in range(i + 1):
            out[i] += math.comb(i, r) * Bd[r] * W[i - r]
    return out


def eval_expansion(expr: OperatorExpansion, bump: BumpFunction, u, weight: str | None = "sqrt"):
    """Numeric value of an expansion with F = B / sqrt(u) (default) or F = B."""
    arr = np.atleast_1d(np.asarray(u, dtype=np.float64))
    if np.any(arr == expr.u0):
        raise DomainError(f"expansion has a pole at u = u0 = {expr.u0!r}")
    if np.any(arr <= 0):
        raise DomainError("expansions are evaluated on u > 0")
    F = base_derivatives(bump, arr, expr.max_derivative, weight)
    r = 1.0 / (expr.u0 - arr)
    total = np.zeros(arr.size, dtype=np.complex128)
    for (h, i, j), c in sorted(expr.terms.items()):
        total += c * arr ** h * F[i] * r ** j
    if all(isinstance(c, int) or np.isreal(c) for c in expr.terms.values()):
        total = total.real
    return total[0] if np.ndim(u) == 0 else total


def envelope(u, u0: float, k: int, extra: int = 0):
    """max(|u-u0|^-k, |u-u0|^-(2k+extra)), the shape of the growth bound."""
    d = np.abs(np.asarray(u, dtype=np.float64) - u0)
    return np.maximum(d ** (-float(k)), d ** (-float(2 * k + extra)))


def class_after(k: int, leading_L: bool = False) -> tuple[int, int, int]:
    """(k, k, k! 3^k), or (k+1, k, k! 3^k) with a leading L."""
    return (k + int(leading_L), k, math.factorial(k) * 3 ** k)


def envelope_ratios(bump: BumpFunction, u0: float, k: int, n: int = 200,
                    leading_L: bool = False, weight: str | None = "sqrt") -> np.ndarray:
    """|expansion(u)| / envelope(u) at n interior points of the support."""
    u = np.linspace(bump.a, bump.b, n + 2)[1:-1]
    u = u[u != u0]
    g = np.abs(eval_expansion(dl_power(k, u0, leading_L), bump, u, weight))
    return g / envelope(u, u0, k, extra=int(leading_L))


def envelope_bound(bump: BumpFunction, u0: float, k: int, n: int = 200,
                   leading_L: bool = False) -> dict:
    """The sampled bound sup |expansion| / envelope and its stability.

    The bound is taken on n points, on a 10x finer grid, and on four
    interleaved quarters of the n points; ``spread`` is max/min over these
    estimates and stays near 1 when the sampled supremum is a genuine bound.
    """
    base = envelope_ratios(bump, u0, k, n, leading_L)
    fine = envelope_ratios(bump, u0, k, 10 * n, leading_L)
    est = [base.max(), fine.max()] + [base[i::4].max() for i in range(4)]
    return {"bound": float(max(est)), "spread": float(max(est) / min(est)),
            "finite": bool(np.all(np.isfinite(fine)))}
