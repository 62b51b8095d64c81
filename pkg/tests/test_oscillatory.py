import cmath
import math

import mpmath
import pytest
from hypothesis import given, strategies as st

from zpd.bump import BumpFunction
from zpd.errors import DomainError, InputError, PreconditionError
from zpd.oscillatory import (OscIntegralSpec, fresnel_tail, fresnel_tail_errors, gamma_log_phase,
                             mandalorian_integral, out_of_band_envelope, quad_I, rs_phase, sp_I,
                             star_params, stationary_diagnostic, taylor_budget)

B = BumpFunction.canonical()
# mpmath.quad reference, xi = 1/3, X = 40, gamma = 2 pi (1/3) 40 (3/2)
I_REF = complex(0.011690319458556153277, -0.02782553409376501749)
M_REF = complex(-3.8706013479956976573e-6, -2.389e-12)


def test_quad_matches_mpmath():
    g = 2 * math.pi / 3 * 40 * 1.5
    r = quad_I(OscIntegralSpec(1 / 3, B, 40.0, g))
    assert abs(r.value - I_REF) < 1e-13
    assert r.abs_error_estimate < 1e-10


def test_quad_against_live_mpmath_off_band():
    xi, X, g = 0.4, 25.0, -37.0
    f = lambda u: mpmath.expj(-2 * mpmath.pi * u * xi) * mpmath.exp(-1 / ((u / X - 1) * (2 - u / X))) \
        * mpmath.power(u, -0.5 + 1j * g)
    ref = complex(mpmath.quad(f, mpmath.linspace(X, 2 * X, 30)))
    assert abs(quad_I(OscIntegralSpec(xi, B, X, g)).value - ref) < 1e-13


@given(st.floats(min_value=-400, max_value=400).filter(lambda g: abs(g) > 1e-3))
def test_conjugate_symmetry(g):
    s = OscIntegralSpec(1 / 3, B, 30.0, g)
    a = quad_I(s, conjugate=True).value
    b = quad_I(s).value
    # conj of the integrand for gamma is the integrand for -gamma with xi -> -xi
    assert abs(a - b.conjugate()) < 1e-12 * (1 + abs(b))


def test_stationary_phase_improves_with_X():
    diffs = []
    for X in (100.0, 1000.0):
        g = 2 * math.pi / 3 * X * 1.5
        s = OscIntegralSpec(1 / 3, B, X, g)
        diffs.append(abs(quad_I(s).value - sp_I(s)))
    assert diffs[1] < diffs[0] / 5


def test_sp_outside_band_and_errors():
    s = OscIntegralSpec(1 / 3, B, 100.0, 2 * math.pi / 3 * 100 * 5.0)
    assert sp_I(s) == 0
    with pytest.raises(DomainError):
        sp_I(OscIntegralSpec(1 / 3, B, 100.0, -5.0))
    with pytest.raises(PreconditionError):
        OscIntegralSpec(1 / 3, B, 5.0, 1.0)
    with pytest.raises(InputError):
        quad_I(OscIntegralSpec(1 / 3, B, 40.0, 10.0), tol=1e-15)


def test_band_and_diagnostics():
    band = star_params(1.0, 2.0, 0.0, 1.0, 1.0)
    assert band.a_star == pytest.approx((3 - math.sqrt(5)) / 2)
    assert band.b_star == pytest.approx(4.0)
    d = stationary_diagnostic(OscIntegralSpec(1 / 3, B, 40.0, 125.0)).as_record()
    assert d["regime"] == "in-band" and "abs_diff" in d
    assert taylor_budget(1e5)["taylor_budget"] == pytest.approx(1e-3)
    assert out_of_band_envelope(100.0, 1000.0) == pytest.approx(10 * 1e-4 * 1e-6)


def test_gamma_log_phase_extended_precision():
    g, x = 3.0e9, 1.0 / 3.0
    ref = mpmath.mpf(g) * mpmath.log(mpmath.mpf(x))
    ref = float(ref - 2 * mpmath.pi * mpmath.floor(ref / (2 * mpmath.pi)))
    got = gamma_log_phase(g, x) % (2 * math.pi)
    assert min(abs(got - ref), 2 * math.pi - abs(got - ref)) < 1e-6


def test_rs_phase_against_theta():
    from zpd.zeros.theta import theta
    for g in (50.0, 500.0, 5000.0):
        # 2 theta(g) = g log(g / 2 pi e) - pi/4 + 1/(24 g) + O(g^-3)
        d = cmath.exp(1j * rs_phase(g)) / cmath.exp(2j * theta(g))
        assert abs(d - cmath.exp(-1j / (24 * g))) < 1e-6


def test_mandalorian_matches_mpmath():
    v = mandalorian_integral(1 / 3, B, 40.0)
    assert abs(v - M_REF) < 1e-15


def test_mandalorian_precondition():
    with pytest.raises(PreconditionError):
        mandalorian_integral(1 / 3, BumpFunction.canonical(0.1, 2.0), 15.0)
    assert mandalorian_integral(1 / 3, BumpFunction.canonical(amplitude=0.0), 40.0) == 0


@pytest.mark.parametrize("lam", [0.5, 1.0, 2.0, 10.0])
def test_fresnel_tail(lam):
    closed, direct = fresnel_tail(lam)
    # direct against the complete Fresnel integral minus the central piece
    full = math.sqrt(math.pi) * cmath.exp(-0.25j * math.pi)
    mid = complex(mpmath.quad(lambda u: mpmath.expj(-u * u), [-lam, 0, lam]))
    assert abs(direct - (full - mid)) < 1e-10
    assert abs(closed - direct) < 1e-8
    assert abs(direct) * lam <= 2


def test_fresnel_unit_coefficient_is_off():
    r = fresnel_tail_errors(1.0)
    assert abs(r["closed_unit_coefficient"] - r["direct"]) > 1e-3


def test_fresnel_domain():
    with pytest.raises(DomainError):
        fresnel_tail(0.0)
