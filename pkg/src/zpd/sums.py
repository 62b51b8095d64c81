"""Prime-side and zero-side sums, the explicit formula and the character
reductions.

Every sum runs in a fixed order (ascending n, ascending gamma) with
compensated accumulation, so results do not depend on how work is split.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

import numpy as np

from . import kernels
from .arith import (DirichletCharacter, ModularTwist, euler_phi, gauss_sum, mobius,
                    prime_powers_in, _root_table)
from .bump import BumpFunction, support_constant
from .errors import (IncompleteTableError, InputError, PreconditionError)
from .operators import base_derivatives, dl_power
from .oscillatory import (OscIntegralSpec, gamma_log_phase, mandalorian_integral, quad_I)
from .zeros.table import ZeroTable
from .zeros.theta import theta

TWO_PI = 2.0 * math.pi
EPS = np.finfo(float).eps


@dataclass(frozen=True)
class SumResult:
    value: complex
    n_terms: int
    truncation_certificate: bool
    error_budget: float


def _as_xi(xi) -> tuple[float, Fraction | None]:
    if isinstance(xi, ModularTwist):
        return xi.xi, xi.value
    if isinstance(xi, Fraction):
        return float(xi), xi
    x = float(xi)
    if not (x >= 0 and math.isfinite(x)):
        raise InputError(f"xi must be a non-negative real, got {xi!r}")
    return x, None


def _ksum(z: np.ndarray) -> complex:
    z = np.asarray(z, dtype=np.complex128)
    if z.size == 0:
        return 0j
    return complex(kernels.kahan_sum(np.ascontiguousarray(z.real)),
                   kernels.kahan_sum(np.ascontiguousarray(z.imag)))


def _budget(z: np.ndarray) -> float:
    return 4.0 * EPS * float(np.sum(np.abs(z))) if z.size else 0.0


def _check_X(bump: BumpFunction, X: float) -> None:
    xb = support_constant(bump).x_b
    if not X > xb:
        raise PreconditionError(f"X = {X} must exceed X_B = {xb}")


def twist_factors(n: np.ndarray, xi) -> np.ndarray:
    """e(-n xi); exact rational reduction when xi is rational."""
    x, frac = _as_xi(xi)
    if frac is not None:
        m, q = frac.numerator, frac.denominator
        return _root_table(q)[(-(n % q) * m) % q]
    if x == 0.0:
        return np.ones(n.shape, dtype=np.complex128)
    r = np.array([math.fmod(float(k) * x, 1.0) for k in n.tolist()])
    return np.exp(-TWO_PI * 1j * r)


def _prime_terms(bump: BumpFunction, X: float, weights=None):
    ns, lam = prime_powers_in(X * bump.a, X * bump.b)
    b = bump.eval(ns / X) if ns.size else np.zeros(0)
    return ns, lam * b


def prime_side(xi, bump: BumpFunction, X: float) -> SumResult:
    """sum Lambda(n) e(-n xi) B(n/X)."""
    _check_X(bump, X)
    ns, w = _prime_terms(bump, X)
    z = w * twist_factors(ns, xi)
    return SumResult(_ksum(z), int(ns.size), True, _budget(z))


def untwisted_sum(bump: BumpFunction, X: float) -> SumResult:
    """sum Lambda(n) B(n/X)."""
    _check_X(bump, X)
    ns, w = _prime_terms(bump, X)
    return SumResult(complex(kernels.kahan_sum(np.ascontiguousarray(w)), 0.0) if w.size else 0j,
                     int(ns.size), True, _budget(w))


def _zero_window(table: ZeroTable, lo: float, hi: float) -> slice:
    table.require_height(hi)
    i = int(np.searchsorted(table.gamma, lo, side="right"))
    j = int(np.searchsorted(table.gamma, hi, side="left"))
    return slice(i, j)


def _phases(gam: np.ndarray, x: float) -> np.ndarray:
    """x^{-i gamma} for each ordinate."""
    if x == 1.0:
        return np.ones(gam.shape, dtype=np.complex128)
    ang = np.array([-gamma_log_phase(g, x) for g in gam.tolist()])
    return np.exp(1j * ang)


def zero_side(xi, bump: BumpFunction, X: float, table: ZeroTable) -> SumResult:
    """sum over zeros of xi^{-1/2 - i gamma} Z(rho) B(gamma / (2 pi xi X))."""
    _check_X(bump, X)
    x, _ = _as_xi(xi)
    if not x > 0:
        raise InputError("zero_side needs xi > 0")
    scale = TWO_PI * x * X
    sl = _zero_window(table, scale * bump.a, scale * bump.b)
    gam = table.gamma[sl]
    w = bump.eval(gam / scale) * table.multiplicity[sl]
    z = x ** -0.5 * w * _phases(gam, x) * table.phase[sl]
    return SumResult(_ksum(z), int(gam.size), True, _budget(z))


# -- explicit formula -----------------------------------------------------------------

def _trudgian_S(t: float) -> float:
    """An explicit bound for |S(t)| valid for t >= e."""
    t = max(t, math.e)
    return 0.112 * math.log(t) + 0.278 * math.log(math.log(t)) + 2.51


@lru_cache(maxsize=64)
def _term_moments(bump: BumpFunction, k: int) -> dict[int, float]:
    """M_j = int_a^b sum_{terms with power j} |c| v^h |g^(i)(v)| dv for [DL]^k g."""
    expr = dl_power(k, 0.0)
    nodes, weights = np.polynomial.legendre.leggauss(400)
    # composite rule on 8 pieces keeps the steep edges of B resolved
    edges = np.linspace(bump.a, bump.b, 9)
    v = np.concatenate([0.5 * (p + q) + 0.5 * (q - p) * nodes for p, q in zip(edges[:-1], edges[1:])])
    wt = np.concatenate([0.5 * (q - p) * weights for p, q in zip(edges[:-1], edges[1:])])
    F = base_derivatives(bump, v, expr.max_derivative, "sqrt")
    out: dict[int, float] = {}
    for (h, i, j), c in expr.terms.items():
        out[j] = out.get(j, 0.0) + abs(c) * float(np.sum(wt * v ** h * np.abs(F[i])))
    return out


def zero_integral_bound(bump: BumpFunction, xi: float, X: float, gamma: float, k: int) -> float:
    """Bound for |I(gamma)| from k integrations by parts, valid when
    gamma/(2 pi xi X) lies outside [a, b]."""
    u0 = gamma / (TWO_PI * xi * X)
    if bump.a <= u0 <= bump.b:
        return math.inf
    d = u0 - bump.b if u0 > bump.b else bump.a - u0
    M = _term_moments(bump, k)
    s = sum(m * d ** (-j) for j, m in M.items())
    return abs(bump.amplitude) * math.sqrt(X) * (TWO_PI * xi * X) ** (-k) * s


def zero_tail_bound(bump: BumpFunction, xi: float, X: float, H: float, k: int,
                    ratio: float = 1.02, span: float = 1e8) -> float:
    """Bound for sum over zeros with |gamma| > H of |I(gamma)|.

    Zeros are counted block by block with N(t2) - N(t1) <= (theta(t2) -
    theta(t1))/pi + 2 max|S|, and each block is charged its largest term.
    """
    if bump.is_zero:
        return 0.0
    if H * 1.0 <= TWO_PI * xi * X * bump.b:
        return math.inf
    total = 0.0
    t1 = H
    th1 = theta(t1)
    while t1 < H * span:
        t2 = t1 * ratio
        th2 = theta(t2)
        count = (th2 - th1) / math.pi + 2.0 * _trudgian_S(t2)
        total += count * (zero_integral_bound(bump, xi, X, t1, k)
                          + zero_integral_bound(bump, xi, X, -t1, k))
        t1, th1 = t2, th2
    # beyond the last block the terms fall like t^-k with at most log t zeros per unit
    last = zero_integral_bound(bump, xi, X, t1, k) + zero_integral_bound(bump, xi, X, -t1, k)
    total += last * t1 * math.log(t1) / max(k - 1, 1)
    return total


def choose_height(bump: BumpFunction, xi: float, X: float, tail_tol: float,
                  max_height: float, k_max: int = 8) -> tuple[float, int, float]:
    """Smallest height H (on a 1.05 geometric grid) with tail bound <= tail_tol."""
    H = TWO_PI * xi * X * bump.b * 1.25
    best = (math.inf, 0)
    while True:
        for k in range(2, k_max + 1):
            tb = zero_tail_bound(bump, xi, X, H, k)
            if tb < best[0]:
                best = (tb, k)
        if best[0] <= tail_tol:
            return H, best[1], best[0]
        if H > max_height:
            return H, best[1], best[0]
        H *= 1.05
        best = (math.inf, 0)


@dataclass
class ExplicitFormulaTerms:
    residual: complex
    prime_sum: complex
    integral: complex
    zero_sum: complex
    tail_bound: float
    quad_budget: float
    height: float
    k: int
    n_zeros: int

    @property
    def budget(self) -> float:
        return self.tail_bound + self.quad_budget


def explicit_formula_terms(xi, bump: BumpFunction, X: float, table: ZeroTable,
                           tol: float = 1e-7, quad_tol: float = 1e-12,
                           height: float | None = None) -> ExplicitFormulaTerms:
    """Both sides of the explicit formula for phi(u) = e(-u xi) B(u/X).

    The zero sum runs over rho = 1/2 +- i gamma with gamma <= H, where H is
    chosen so the bound for the omitted zeros is at most tol/2 (or given).
    """
    x, _ = _as_xi(xi)
    _check_X(bump, X)
    if bump.is_zero:
        return ExplicitFormulaTerms(0j, 0j, 0j, 0j, 0.0, 0.0, 0.0, 0, 0)
    if height is None:
        H, k, tail = choose_height(bump, x, X, 0.5 * tol, table.height_max)
        if tail > 0.5 * tol:
            raise IncompleteTableError(
                f"tail bound {tail:.3g} exceeds {0.5 * tol:g} within the table; "
                f"a larger height is needed", required_height=H)
    else:
        H = height
        tail, k = min((zero_tail_bound(bump, x, X, H, kk), kk) for kk in range(2, 9))
    table.require_height(H)
    sl = slice(0, int(np.searchsorted(table.gamma, H, side="right")))
    gam = table.gamma[sl]
    mult = table.multiplicity[sl]
    vals = []
    qb = 0.0
    for g, m in zip(gam.tolist(), mult.tolist()):
        for s in (g, -g):
            r = quad_I(OscIntegralSpec(x, bump, X, s), quad_tol)
            vals.append(m * r.value)
            qb += m * r.abs_error_estimate + m * quad_tol * (1.0 + abs(r.value))
    zsum = _ksum(np.array(vals)) if vals else 0j
    mand = mandalorian_integral(x, bump, X, full=True)
    ps = prime_side(xi, bump, X)
    residual = ps.value - (mand.value - zsum)
    qb += mand.abs_error_estimate + ps.error_budget
    return ExplicitFormulaTerms(residual, ps.value, mand.value, zsum, tail, qb, H, k, int(gam.size))


def explicit_formula_residual(xi, bump: BumpFunction, X: float, table: ZeroTable,
                              tol: float = 1e-7) -> complex:
    return explicit_formula_terms(xi, bump, X, table, tol).residual


# -- Theorem 4.1 and the superbound -----------------------------------------------------

@dataclass(frozen=True)
class ExponentFit:
    slope: float
    intercept: float
    residual_rms: float
    points: tuple
    dropped: int = 0


def fit_exponent(points) -> ExponentFit:
    """Least-squares fit of log|D| against log X; zero values are dropped."""
    pts = [(float(X), abs(complex(D))) for X, D in points]
    usable = [(X, d) for X, d in pts if d > 0 and X > 0]
    dropped = len(pts) - len(usable)
    if len(usable) < 3:
        raise InputError(f"an exponent fit needs at least 3 non-zero points, got {len(usable)}")
    lx = np.log([p[0] for p in usable])
    ly = np.log([p[1] for p in usable])
    A = np.stack([lx, np.ones_like(lx)], axis=1)
    (slope, icpt), *_ = np.linalg.lstsq(A, ly, rcond=None)
    rms = float(np.sqrt(np.mean((A @ np.array([slope, icpt]) - ly) ** 2)))
    return ExponentFit(float(slope), float(icpt), rms,
                       tuple(zip(lx.tolist(), ly.tolist())), dropped)


@dataclass
class ExperimentSpec:
    twist: object
    bump: BumpFunction
    X_grid: tuple
    zero_table: ZeroTable | None = None
    tolerance: float = 1e-10

    def __post_init__(self):
        self.X_grid = tuple(float(x) for x in self.X_grid)
        if not self.X_grid:
            raise InputError("empty X grid")
        if any(b <= a for a, b in zip(self.X_grid[:-1], self.X_grid[1:])):
            raise InputError("X grid must be strictly ascending")
        xb = support_constant(self.bump).x_b
        if self.X_grid[0] <= xb:
            raise PreconditionError(f"every X must exceed X_B = {xb}")

    @property
    def xi(self) -> float:
        return _as_xi(self.twist)[0]

    def required_height(self, dilation: bool = True) -> float:
        s = self.xi if dilation else 1.0
        return TWO_PI * s * max(self.X_grid) * self.bump.b

    def check_table(self, dilation: bool = True) -> None:
        need = self.required_height(dilation)
        if self.zero_table is None:
            raise IncompleteTableError("no zero table supplied", required_height=need)
        self.zero_table.require_height(need)


def theorem41_defect(spec: ExperimentSpec, fit: bool = True):
    """[(X, D(X))] with D = prime_side + zero_side, and the exponent fit."""
    spec.check_table()
    rows = []
    for X in spec.X_grid:
        p = prime_side(spec.twist, spec.bump, X)
        z = zero_side(spec.twist, spec.bump, X, spec.zero_table)
        rows.append((X, p.value + z.value, p.error_budget + z.error_budget))
    f = fit_exponent([(X, D) for X, D, _ in rows]) if fit else None
    return rows, f


def superbound_functional(twist: ModularTwist, bump: BumpFunction, X: float,
                          table: ZeroTable) -> complex:
    """sum xi^{-i gamma} Z(rho) B(gamma/(2 pi X)) + (mu(q)/phi(q)) sum Lambda(n) B(n/X)."""
    return superbound_parts(twist, bump, X, table)["value"]


def superbound_parts(twist: ModularTwist, bump: BumpFunction, X: float, table: ZeroTable) -> dict:
    _check_X(bump, X)
    scale = TWO_PI * X
    sl = _zero_window(table, scale * bump.a, scale * bump.b)
    gam = table.gamma[sl]
    w = bump.eval(gam / scale) * table.multiplicity[sl]
    z = w * _phases(gam, twist.xi) * table.phase[sl]
    zs = _ksum(z)
    mu = mobius(twist.q)
    if mu == 0:
        second = 0j
    else:
        second = Fraction(mu, euler_phi(twist.q)).__float__() * untwisted_sum(bump, X).value
    return {"zero_sum": zs, "second": second, "value": zs + second, "n_zeros": int(gam.size)}


def superbound_dilated(twist: ModularTwist, bump: BumpFunction, X: float, table: ZeroTable) -> complex:
    """The same functional with the Theorem 4.1 normalisation
    xi^{-1/2 - i gamma} B(gamma/(2 pi xi X)); a diagnostic companion."""
    z = zero_side(twist, bump, X, table).value
    mu = mobius(twist.q)
    second = 0j if mu == 0 else mu / euler_phi(twist.q) * untwisted_sum(bump, X).value
    return z + second


def aloevera_defect(twist: ModularTwist, bump: BumpFunction, X: float) -> complex:
    """prime_side(m/q) - (mu(q)/phi(q)) untwisted_sum."""
    p = prime_side(twist, bump, X).value
    mu = mobius(twist.q)
    if mu == 0:
        return p
    return p - mu / euler_phi(twist.q) * untwisted_sum(bump, X).value


# -- characters ------------------------------------------------------------------------

def character_sum(chi: DirichletCharacter, bump: BumpFunction, X: float) -> SumResult:
    """sum Lambda(n) chi(n) B(n/X), directly."""
    _check_X(bump, X)
    ns, w = _prime_terms(bump, X)
    z = w * chi.values[ns % chi.modulus]
    return SumResult(_ksum(z), int(ns.size), True, _budget(z))


def character_sum_via_gauss(chi: DirichletCharacter, bump: BumpFunction, X: float,
                            printed_sign: bool = False) -> SumResult:
    """(tau(chi)/q) sum_{(m,q)=1} conj(chi(m)) prime_side(m/q).

    With ``printed_sign`` an extra factor chi(-1) is applied, which changes
    the sign for odd characters.
    """
    q = chi.modulus
    if q <= 1 or not chi.is_primitive:
        raise PreconditionError("the Gauss-sum route needs a primitive character mod q > 1")
    _check_X(bump, X)
    cvals = np.conj(chi.values)
    parts = []
    budget = 0.0
    for m in range(1, q):
        if math.gcd(m, q) != 1:
            continue
        p = prime_side(ModularTwist(m, q), bump, X)
        parts.append(cvals[m] * p.value)
        budget += p.error_budget
    tau = gauss_sum(chi)
    fac = tau / q * (chi.parity if printed_sign else 1)
    val = fac * _ksum(np.array(parts))
    return SumResult(val, len(parts), True, budget * abs(fac) * len(parts))


@dataclass
class DyadicResult:
    value: complex
    direct: complex
    pieces: list = field(default_factory=list)

    @property
    def gap(self) -> complex:
        return self.value - self.direct


def dyadic_assemble(chi: DirichletCharacter, bump: BumpFunction, X: float) -> DyadicResult:
    """sum_k S(X/2^k), S(Y) = sum Lambda(n) chi(n) B(n/Y), next to the exact
    sum over n <= X and the exact dyadic pieces over (Y/2, Y]."""
    if bump.kind != "plateau" or bump.plateau_flat[0] > 0.5 or bump.plateau_flat[1] < 1.0:
        raise PreconditionError("dyadic assembly needs a plateau bump equal to 1 on [1/2, 1]")
    ns, lam = prime_powers_in(1, X)
    chiv = chi.values[ns % chi.modulus] if ns.size else np.zeros(0, dtype=complex)
    direct = _ksum(lam * chiv)
    pieces = []
    Y = float(X)
    while True:
        lo, hi = bump.a * Y, bump.b * Y
        mask = (ns >= lo) & (ns <= hi)
        smooth = _ksum(lam[mask] * chiv[mask] * bump.eval(ns[mask] / Y)) if np.any(mask) else 0j
        if Y < X and not np.any(ns <= hi):
            smooth = 0j
        pe = (ns > Y / 2) & (ns <= Y)
        exact = _ksum(lam[pe] * chiv[pe]) if np.any(pe) else 0j
        pieces.append({"Y": Y, "smoothed": smooth, "exact_piece": exact,
                       "majorized": abs(exact) <= abs(smooth) + 1e-12})
        if Y < 2.0:
            break
        Y /= 2.0
    value = _ksum(np.array([p["smoothed"] for p in pieces]))
    return DyadicResult(value, direct, pieces)
