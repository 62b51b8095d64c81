"""Oscillatory integrals: a panel quadrature oracle and the stationary-phase
main term.

The integral

    I(gamma) = int e(-u xi) B(u/X) u^{-1/2 + i gamma} du

is computed in the variable v = u/X, where the total phase is
psi(v) = -2 pi xi X v + gamma log v.  Panels are cut so that psi changes by
at most a quarter turn across each one and no panel is wider than
``h_max``; every panel is integrated by a 21-point Gauss-Kronrod rule with
the embedded 10-point Gauss rule as error estimate, and panels whose
estimate is too large are bisected.  The phase at each panel midpoint is
factored out so the kernels only see small relative phases.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .bump import BumpFunction, support_constant
from .ddouble import dd_add, dd_mul, log_dd, reduce_2pi
from .errors import DomainError, InputError, PreconditionError, QuadratureError

TWO_PI = 2.0 * math.pi
DD_PHASE_THRESHOLD = 1e8
DEFAULT_PANEL_BUDGET = 20_000_000

# Gauss-Kronrod 21 / Gauss 10 on [-1, 1], nodes ascending
_XGK_HALF = (
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.0,
)
_WGK_HALF = (
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077208799208294, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821,
)
_WG_HALF = (
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338,
)
XK = np.array([-x for x in _XGK_HALF[:-1]] + [0.0] + list(reversed(_XGK_HALF[:-1])))
WK = np.array(list(_WGK_HALF[:-1]) + [_WGK_HALF[-1]] + list(reversed(_WGK_HALF[:-1])))
# Gauss nodes sit at the odd positions of XK
WG = np.array(list(_WG_HALF) + list(reversed(_WG_HALF)))

_PHASE_LINEAR_LOG = 0
_PHASE_QUADRATIC = 1
_AMP_BUMP_POWER = 0
_AMP_BUMP_MANDALORIAN = 1
_AMP_POWER = 2


@dataclass(frozen=True)
class OscIntegralSpec:
    xi: float
    bump: BumpFunction
    X: float
    gamma: float

    def __post_init__(self):
        if not self.xi > 0:
            raise InputError("xi must be positive")
        if self.gamma == 0:
            raise InputError("gamma must be non-zero")
        xb = support_constant(self.bump).x_b
        if not self.X > xb:
            raise PreconditionError(f"X = {self.X} must exceed X_B = {xb}")

    @property
    def gamma_star(self) -> float:
        return self.gamma / (TWO_PI * self.xi * self.X)


@dataclass(frozen=True)
class StationaryBand:
    a_star: float
    b_star: float
    gamma_star: float

    def contains(self, g: float | None = None) -> bool:
        g = self.gamma_star if g is None else g
        return self.a_star <= g <= self.b_star


@dataclass(frozen=True)
class QuadResult:
    value: complex
    abs_error_estimate: float
    panels: int


@dataclass
class Diagnostic:
    gamma: float
    gamma_star: float
    regime: str
    value: complex
    error_estimate: float
    extra: dict = field(default_factory=dict)

    def as_record(self) -> dict:
        return {"gamma": self.gamma, "gamma_star": self.gamma_star, "regime": self.regime,
                "re": self.value.real, "im": self.value.imag,
                "error_estimate": self.error_estimate, **self.extra}


def star_params(a: float, b: float, gamma: float, xi: float, X: float) -> StationaryBand:
    if not (a > 0 and b > a):
        raise InputError("need 0 < a < b")
    a_star = (1.0 + 2.0 * a - math.sqrt(1.0 + 4.0 * a)) / 2.0
    b_star = (1.0 + 2.0 * b + math.sqrt(1.0 + 4.0 * b)) / 2.0
    return StationaryBand(a_star, b_star, gamma / (TWO_PI * xi * X))


def _reduced(x: float) -> float:
    return math.remainder(x, TWO_PI)


def gamma_log_phase(gamma: float, x: float) -> float:
    """gamma * log(x) reduced mod 2 pi; double-double above 1e8 radians."""
    val = gamma * math.log(x)
    if abs(val) <= DD_PHASE_THRESHOLD:
        return _reduced(val)
    return reduce_2pi(dd_mul((gamma, 0.0), log_dd(x)))


def rs_phase(gamma: float) -> float:
    """2 pi (gamma/(2 pi) log(gamma/(2 pi e)) + 7/8) mod 2 pi."""
    if gamma <= 0:
        raise DomainError("the phase needs gamma > 0")
    val = gamma * (math.log(gamma / TWO_PI) - 1.0)
    if abs(val) > DD_PHASE_THRESHOLD:
        ldd = dd_add(log_dd(gamma), (-math.log(TWO_PI) - 1.0, 0.0))
        with_pi = dd_mul((gamma, 0.0), ldd)
        return _reduced(reduce_2pi(with_pi) + 1.75 * math.pi)
    return _reduced(val + 1.75 * math.pi)


# -- panel construction ----------------------------------------------------------

def _invert_monotone(f, df, targets, lo, hi, iters=60):
    """Solve f(v) = target on [lo, hi] (f monotone) for an array of targets."""
    if targets.size == 0:
        return targets
    a = np.full(targets.shape, lo)
    b = np.full(targets.shape, hi)
    fa = f(a) - targets
    v = a + (b - a) * np.clip(targets - f(lo), 0, None) / max(abs(f(hi) - f(lo)), 1e-300)
    v = np.clip(v, lo, hi)
    for _ in range(iters):
        fv = f(v) - targets
        same = np.sign(fv) == np.sign(fa)
        a = np.where(same, v, a)
        fa = np.where(same, fv, fa)
        b = np.where(same, b, v)
        d = df(v)
        with np.errstate(divide="ignore", invalid="ignore"):
            newton = v - fv / d
        ok = (newton > a) & (newton < b) & np.isfinite(newton)
        v_new = np.where(ok, newton, 0.5 * (a + b))
        if np.all(np.abs(v_new - v) <= 4e-16 * np.abs(v) + 1e-300):
            v = v_new
            break
        v = v_new
    return v


def _phase_breaks(psi, dpsi, lo, hi, stationary, max_turn):
    """Break points so that psi changes by at most ``max_turn`` per panel."""
    pieces = [lo, hi]
    if stationary is not None and lo < stationary < hi:
        pieces = [lo, stationary, hi]
    out = [np.array([lo])]
    for p, q in zip(pieces[:-1], pieces[1:]):
        fp, fq = psi(p), psi(q)
        n = int(math.ceil(abs(fq - fp) / max_turn))
        if n > 1:
            targets = fp + (fq - fp) * np.arange(1, n) / n
            inc = fq > fp
            f = psi if inc else (lambda v: -psi(v))
            df = dpsi if inc else (lambda v: -dpsi(v))
            t = targets if inc else -targets
            out.append(_invert_monotone(f, df, t, p, q))
        out.append(np.array([q]))
    return np.unique(np.concatenate(out))


def _refine_width(breaks, h_max):
    widths = np.diff(breaks)
    reps = np.maximum(1, np.ceil(widths / h_max).astype(np.int64))
    if np.all(reps == 1):
        return breaks
    parts = [breaks[:1]]
    for x0, w, r in zip(breaks[:-1], widths, reps):
        parts.append(x0 + w * np.arange(1, r + 1) / r)
    return np.concatenate(parts)


# -- the adaptive engine ------------------------------------------------------------

@dataclass
class _Integrand:
    phase_kind: int
    p1: float
    p2: float
    amp_kind: int
    power: float
    scale: float
    bump_args: tuple

    def mid_phase(self, mid: np.ndarray) -> np.ndarray:
        if self.phase_kind == _PHASE_QUADRATIC:
            return self.p1 * mid * mid
        lin = self.p1 * mid
        if self.p2 == 0.0:
            return lin
        big = np.abs(self.p2 * np.log(mid)) > DD_PHASE_THRESHOLD
        out = lin + self.p2 * np.log(mid)
        for i in np.nonzero(big)[0]:
            out[i] = math.remainder(lin[i], TWO_PI) + gamma_log_phase(self.p2, float(mid[i]))
        return out

    def panels(self, lo: np.ndarray, hi: np.ndarray):
        k, g = kernels.osc_panels(
            np.ascontiguousarray(lo), np.ascontiguousarray(hi), self.phase_kind, self.p1, self.p2,
            self.amp_kind, self.power, self.scale, *self._bump5(), XK, WK, WG)
        rot = np.exp(1j * self.mid_phase(0.5 * (lo + hi)))
        return np.asarray(k) * rot, np.asarray(g) * rot

    def _bump5(self):
        kind, a, b, c, d = self.bump_args
        return kind, a, b, c, d


def _csum(z: np.ndarray) -> complex:
    return complex(math.fsum(z.real.tolist()), math.fsum(z.imag.tolist()))


def adaptive_panels(f: _Integrand, breaks: np.ndarray, tol: float,
                    budget: int = DEFAULT_PANEL_BUDGET, max_rounds: int = 40,
                    abs_floor: float = 0.0) -> QuadResult:
    """Integrate over the panels given by ``breaks``, bisecting until the summed
    |Kronrod - Gauss| is below tol * (1 + |value|) + abs_floor."""
    lo = breaks[:-1].copy()
    hi = breaks[1:].copy()
    kv, gv = f.panels(lo, hi)
    err = np.abs(kv - gv)
    for _ in range(max_rounds):
        value = _csum(kv)
        target = tol * (1.0 + abs(value)) + abs_floor
        total_err = math.fsum(err.tolist())
        if total_err <= target:
            return QuadResult(value, total_err, int(lo.size))
        split = err > 0.5 * target / lo.size
        if not np.any(split):
            split = err >= err.max()
        if lo.size + int(split.sum()) > budget:
            break
        mid = 0.5 * (lo[split] + hi[split])
        nlo = np.concatenate([lo[~split], lo[split], mid])
        nhi = np.concatenate([hi[~split], mid, hi[split]])
        nk, ng = f.panels(np.concatenate([lo[split], mid]), np.concatenate([mid, hi[split]]))
        kv = np.concatenate([kv[~split], nk])
        gv = np.concatenate([gv[~split], ng])
        order = np.argsort(nlo, kind="stable")
        lo, hi, kv, gv = nlo[order], nhi[order], kv[order], gv[order]
        err = np.abs(kv - gv)
    value = _csum(kv)
    total_err = math.fsum(err.tolist())
    raise QuadratureError(
        f"tolerance {tol:g} not reached with {lo.size} panels (error estimate {total_err:.3g})",
        estimate=value, error=total_err)


# -- the integrals -------------------------------------------------------------------

def _bump_interval(bump: BumpFunction) -> tuple[float, float]:
    return float(bump.a), float(bump.b)


def quad_I(spec: OscIntegralSpec, tol: float = 1e-12, h_max: float | None = None,
           max_turn: float = 0.5 * math.pi, budget: int = DEFAULT_PANEL_BUDGET,
           conjugate: bool = False) -> QuadResult:
    """The integral I(gamma) to within tol * (1 + |value|).

    With ``conjugate`` the complex-conjugate integrand is integrated instead.
    """
    if tol < 1e-13:
        raise InputError("tol must be at least 1e-13")
    bump = spec.bump
    if bump.is_zero:
        return QuadResult(0j, 0.0, 0)
    a, b = _bump_interval(bump)
    sgn = -1.0 if conjugate else 1.0
    c = TWO_PI * spec.xi * spec.X
    g = spec.gamma
    p1, p2 = sgn * -c, sgn * g
    h_max = (b - a) / 32.0 if h_max is None else h_max

    def psi(v):
        return p1 * v + p2 * np.log(v)

    def dpsi(v):
        return p1 + p2 / v

    vstar = g / c
    breaks = _phase_breaks(psi, dpsi, a, b, vstar, max_turn)
    breaks = _refine_width(breaks, h_max)
    amp = bump.amplitude
    f = _Integrand(_PHASE_LINEAR_LOG, p1, p2, _AMP_BUMP_POWER, -0.5, 1.0, bump.kernel_args)
    scale = math.sqrt(spec.X) * abs(amp)
    res = adaptive_panels(f, breaks, tol / max(scale, 1e-300), budget,
                          abs_floor=0.0)
    # the factor X^{1/2 + i gamma}
    rot = cmath.exp(1j * gamma_log_phase(p2, spec.X))
    value = math.sqrt(spec.X) * amp * rot * res.value
    err = scale * res.abs_error_estimate
    return QuadResult(value, err, res.panels)


def sp_I(spec: OscIntegralSpec) -> complex:
    """The stationary-phase main term; 0 when gamma_star lies outside the band."""
    if spec.gamma <= 0:
        raise DomainError("the stationary-phase term needs gamma > 0")
    band = star_params(spec.bump.a, spec.bump.b, spec.gamma, spec.xi, spec.X)
    if not band.contains():
        return 0j
    bval = spec.bump.eval(band.gamma_star)
    if bval == 0.0:
        return 0j
    ang = _reduced(rs_phase(spec.gamma) - gamma_log_phase(spec.gamma, spec.xi))
    return spec.xi ** -0.5 * bval * cmath.exp(1j * ang)


def stationary_diagnostic(spec: OscIntegralSpec, tol: float = 1e-12) -> Diagnostic:
    band = star_params(spec.bump.a, spec.bump.b, spec.gamma, spec.xi, spec.X)
    q = quad_I(spec, tol)
    regime = "in-band" if band.contains() else "out-of-band"
    extra = {"sp": sp_I(spec)} if spec.gamma > 0 else {}
    if extra:
        extra = {"sp_re": extra["sp"].real, "sp_im": extra["sp"].imag,
                 "abs_diff": abs(q.value - extra["sp"])}
    return Diagnostic(spec.gamma, band.gamma_star, regime, q.value, q.abs_error_estimate, extra)


def out_of_band_envelope(X: float, gamma: float) -> float:
    """X^{1/2} max(X^-2 gamma^-2, gamma^-4)."""
    g = abs(gamma)
    return math.sqrt(X) * max(X ** -2 * g ** -2, g ** -4)


def taylor_budget(X: float) -> dict:
    """The internal scale Delta = X^{-2/5} and the Taylor budget X Delta^4 = X^{-3/5}."""
    delta = X ** -0.4
    return {"X": X, "delta": delta, "taylor_budget": X * delta ** 4}


def mandalorian_integral(xi: float, bump: BumpFunction, X: float, tol: float = 1e-13,
                         full: bool = False):
    """int (1 - 1/(u^3 - u)) e(-u xi) B(u/X) du over X supp(B)."""
    xb = support_constant(bump).x_b
    if not X > xb:
        raise PreconditionError(f"X = {X} must exceed X_B = {xb}, or the pole at u = 1 enters")
    if bump.is_zero:
        res = QuadResult(0j, 0.0, 0)
        return res if full else res.value
    a, b = _bump_interval(bump)
    p1 = -TWO_PI * xi * X
    breaks = np.linspace(a, b, max(2, int(math.ceil(abs(p1) * (b - a) / (0.5 * math.pi)))) + 1)
    breaks = _refine_width(breaks, (b - a) / 32.0)
    f = _Integrand(_PHASE_LINEAR_LOG, p1, 0.0, _AMP_BUMP_MANDALORIAN, 0.0, X, bump.kernel_args)
    scale = X * abs(bump.amplitude)
    res = adaptive_panels(f, breaks, tol / scale)
    out = QuadResult(X * bump.amplitude * res.value, scale * res.abs_error_estimate, res.panels)
    return out if full else out.value


# -- the Fresnel tail ------------------------------------------------------------------

def _half_line(power: float, lam: float, U: float, tol: float) -> QuadResult:
    """int_lam^U e^{-i u^2} u^power du on quarter-turn panels."""
    nb = max(1, int(math.ceil((U * U - lam * lam) / (0.25 * math.pi))))
    # equal steps in u^2 give equal phase increments
    s = np.linspace(lam * lam, U * U, nb + 1)
    breaks = np.sqrt(s)
    breaks[0], breaks[-1] = lam, U
    breaks = _refine_width(breaks, 0.25)
    f = _Integrand(_PHASE_QUADRATIC, -1.0, 0.0, _AMP_POWER, power, 1.0, (0, 1.0, 2.0, 0.0, 0.0))
    return adaptive_panels(f, breaks, tol)


def _richardson_tail(power: float, lam: float, tol: float, k0: int = 64, levels: int = 6):
    """Limit of int_lam^{U_j} as U_j -> infinity, with U_j^2 = 2 pi k0 2^j.

    At these cut-offs e^{-i U^2} = 1, so the missing tail expands in odd
    powers of 1/U, which are eliminated by a least-squares fit.
    """
    k0 = max(k0, int(math.ceil(lam * lam / TWO_PI)) + 8)
    Us = [math.sqrt(TWO_PI * k0 * 2 ** j) for j in range(levels)]
    vals = []
    prev_U, acc = lam, 0j
    err = 0.0
    for U in Us:
        r = _half_line(power, prev_U, U, tol)
        acc += r.value
        err += r.abs_error_estimate
        vals.append(acc)
        prev_U = U
    h = 1.0 / np.array(Us)
    first = 1 if power == 0.0 else 3
    cols = [np.ones_like(h)] + [h ** p for p in range(first, first + 2 * (levels - 2), 2)]
    A = np.stack(cols, axis=1)
    y = np.array(vals)
    sol_r = np.linalg.lstsq(A, y.real, rcond=None)[0]
    sol_i = np.linalg.lstsq(A, y.imag, rcond=None)[0]
    # agreement of the fit with a one-level-shorter fit is the extrapolation error
    sol_r2 = np.linalg.lstsq(A[1:, :-1], y.real[1:], rcond=None)[0]
    sol_i2 = np.linalg.lstsq(A[1:, :-1], y.imag[1:], rcond=None)[0]
    value = complex(sol_r[0], sol_i[0])
    ext_err = abs(value - complex(sol_r2[0], sol_i2[0]))
    return value, err + ext_err


def fresnel_tail(lam: float, tol: float = 1e-13) -> tuple[complex, complex]:
    """(closed, direct) evaluations of int_{|u| > lam} e^{-i u^2} du.

    closed = e^{-i lam^2}/(i lam) + (i/2) int_{|u|>lam} e^{-i u^2} u^{-2} du,
    the result of one integration by parts.  Both integrals over |u| > lam
    are twice the half-line integrals by symmetry.
    """
    r = fresnel_tail_errors(lam, tol)
    return r["closed"], r["direct"]


def fresnel_tail_errors(lam: float, tol: float = 1e-13) -> dict:
    """Both evaluations, their error estimates, and the u^-2 integral itself."""
    if not lam > 0:
        raise DomainError("lambda must be positive")
    d, de = _richardson_tail(0.0, lam, tol)
    i2, ie = _richardson_tail(-2.0, lam, tol)
    inv2 = 2.0 * i2
    boundary = cmath.exp(-1j * lam * lam) / (1j * lam)
    return {"closed": boundary + 0.5j * inv2, "direct": 2.0 * d,
            "closed_err": ie, "direct_err": 2.0 * de,
            "inv_square": inv2, "closed_unit_coefficient": boundary + 1j * inv2}
