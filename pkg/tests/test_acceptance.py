"""Every acceptance criterion at its stated tolerance, one PASS/FAIL line each."""

import math
import time

import numpy as np

from zpd.arith import (ModularTwist, char_inversion_check, characters_mod, gauss_sum, mobius,
                       ramanujan_sum)
from zpd.bump import BumpFunction
from zpd.cli import lemma_checks, main, oob_samples
from zpd.operators import class_after
from zpd.oscillatory import (OscIntegralSpec, fresnel_tail_errors, out_of_band_envelope, quad_I,
                             sp_I, star_params)
from zpd.sums import (ExperimentSpec, character_sum, character_sum_via_gauss,
                      explicit_formula_terms, fit_exponent, superbound_dilated, superbound_parts,
                      theorem41_defect)
from zpd.zeros.search import find_zeros, sign_change_count
from zpd.zeros.table import count_N, s_of_T
from zpd.zeros.theta import theta

B = BumpFunction.canonical(1.0, 2.0)
# sup of |quad_I| / envelope over the 50 out-of-band samples at X = 100, xi = 1/3 (seed 20240101),
# measured once as 5.964e-3 and frozen with 10% slack
OOB_CONSTANT = 6.6e-3


def test_criterion_01_zero_engine(reference_zeros, criterion):
    t0 = time.perf_counter()
    t = find_zeros(240.0, workers=1)
    secs = time.perf_counter() - t0
    err = float(np.max(np.abs(t.gamma[:100] - reference_zeros.gamma)))
    n100 = count_N(100.0, t)
    scan = sign_change_count(100.0, step=0.005)
    ok = err <= 1e-8 and n100 == 29 and scan == 29 and secs <= 10.0
    assert criterion(1, ok, f"max |gamma - ref| over 100 zeros = {err:.2e}, N(100) = {n100:g} "
                            f"(scan {scan}), {secs:.2f} s")


def test_criterion_02_counting_identity(zeros_700, criterion):
    rng = np.random.default_rng(2)
    T = rng.uniform(0.5, 690.0, 1000)
    lhs = count_N(T, zeros_700)
    rhs = 1 + theta(T) / math.pi + s_of_T(T, zeros_700)
    ident = float(np.max(np.abs(lhs - rhs)))
    smooth = T / (2 * math.pi) * np.log(T / (2 * math.pi * math.e)) + 7 / 8 + s_of_T(T, zeros_700)
    C = float(np.max(np.abs(lhs - smooth) * T))
    assert criterion(2, ident <= 1e-10 and C <= 1.0,
                     f"identity error {ident:.2e}; smooth-form discrepancy <= C/T with C = {C:.4f}")


def test_criterion_03_phase_law(criterion):
    t = find_zeros(1420.0)
    g = t.gamma[:1000]
    assert g.size == 1000
    law = np.exp(2j * math.pi * (g / (2 * math.pi) * np.log(g / (2 * math.pi * math.e)) + 7 / 8))
    worst = float(np.max(g * np.abs(t.phase[:1000] - law)))
    assert criterion(3, worst <= 10.0, f"max gamma |Z(rho) - law| over 1000 zeros = {worst:.4f}")


def test_criterion_04_explicit_formula(zeros_700, criterion):
    t0 = time.perf_counter()
    res = {X: explicit_formula_terms(ModularTwist(1, 3), B, X, zeros_700, tol=1e-7) for X in (20.0, 40.0)}
    secs = time.perf_counter() - t0
    worst = max(abs(r.residual) for r in res.values())
    heights = ", ".join(f"H={r.height:.0f}" for r in res.values())
    assert criterion(4, worst <= 1e-6 and secs <= 300,
                     f"max |residual| = {worst:.2e} ({heights}), {secs:.1f} s")


def test_criterion_05_stationary_phase(zeros_126k, criterion):
    xi = 1 / 3
    band = star_params(B.a, B.b, 1.0, xi, 1.0)
    meds = []
    for X in (1e2, 1e3, 1e4):
        s = 2 * math.pi * xi * X
        g = zeros_126k.gamma[(zeros_126k.gamma >= s * band.a_star) & (zeros_126k.gamma <= s * band.b_star)]
        g = g[np.linspace(0, g.size - 1, min(50, g.size)).round().astype(int)]
        d = [abs(quad_I(OscIntegralSpec(xi, B, X, x)).value - sp_I(OscIntegralSpec(xi, B, X, x))) for x in g]
        meds.append((X, float(np.median(d))))
    slope = fit_exponent(meds).slope
    gs = oob_samples(xi, B, 100.0, 50, 20240101)
    ratios = [abs(quad_I(OscIntegralSpec(xi, B, 100.0, float(x)), 1e-12).value) / out_of_band_envelope(100.0, x)
              for x in gs]
    const = max(ratios)
    ok = slope <= -0.1 + 0.05 and math.isfinite(const) and const <= OOB_CONSTANT
    assert criterion(5, ok, f"median decay exponent {slope:.3f}; out-of-band constant {const:.3e} "
                            f"(recorded {OOB_CONSTANT:g})")


def test_criterion_06_fresnel(criterion):
    rows = {lam: fresnel_tail_errors(lam) for lam in (0.5, 1.0, 2.0, 10.0)}
    gap = max(abs(r["closed"] - r["direct"]) for r in rows.values())
    lam_bound = max(abs(r["direct"]) * lam for lam, r in rows.items())
    unit = max(abs(r["closed_unit_coefficient"] - r["direct"]) for r in rows.values())
    ok = gap <= 1e-8 and lam_bound <= 2.0
    assert criterion(6, ok, f"|closed - direct| <= {gap:.2e} with the i/2 coefficient "
                            f"(coefficient i gives {unit:.2e}); max |direct| lambda = {lam_bound:.4f}")


def test_criterion_07_mandalorian(criterion):
    r = lemma_checks(grid=(20.0, 40.0, 80.0, 160.0))["mandalorian"]
    slopes = {}
    ok = True
    for xi, vals in r.items():
        ok &= all(v <= vals[0] * (1 + 1e-9) for v in vals)
        slopes[xi] = fit_exponent(list(zip((20.0, 40.0, 80.0, 160.0), vals))).slope
        ok &= slopes[xi] <= 0
    detail = "; ".join(f"xi={xi:.3g}: |M| X = " + ", ".join(f"{v:.2e}" for v in vals) for xi, vals in r.items())
    assert criterion(7, ok, detail)


def test_criterion_08_operators(criterion):
    ops = lemma_checks(grid=(20.0, 40.0, 80.0))["operators"]
    cls_ok = all(v["cls"] == class_after(k) and v["in_class"] for (u0, k, *rest), v in ops.items() if not rest)
    finite = all(v["finite"] for v in ops.values())
    spread = max(v["spread"] for v in ops.values())
    bounds = ", ".join(f"u0={k[0]} k={k[1]}: {v['bound']:.3g}" for k, v in ops.items() if len(k) == 2)
    assert criterion(8, cls_ok and finite and spread < 10,
                     f"classes (k, k, k! 3^k) ok={cls_ok}; bounds {bounds}; spread {spread:.3f}")


def test_criterion_09_theorem41(zeros_21k, criterion):
    t0 = time.perf_counter()
    rows, fit = theorem41_defect(ExperimentSpec(ModularTwist(1, 3), B, (50, 100, 200, 400, 800), zeros_21k))
    secs = time.perf_counter() - t0
    normed = [abs(D) / X ** 0.9 for X, D, _ in rows]
    assert criterion(9, fit.slope <= 1.0 and secs <= 1800,
                     f"fitted slope {fit.slope:.3f}; |D|/X^0.9 = " + ", ".join(f"{v:.2e}" for v in normed))


def test_criterion_10_character_identities(criterion):
    inv = tau = gauss = 0.0
    for q in range(2, 51):
        for chi in characters_mod(q):
            if not chi.is_primitive:
                continue
            tau = max(tau, abs(abs(gauss_sum(chi)) - math.sqrt(q)))
            if q > 30:
                continue
            for n in range(-5, 1001):
                a, b = char_inversion_check(chi, n)
                inv = max(inv, abs(a - b))
            for X in (100.0, 1000.0):
                a = character_sum(chi, B, X).value
                b = character_sum_via_gauss(chi, B, X).value
                gauss = max(gauss, abs(a - b) / (1 + abs(a)))
    ram = max(abs(ramanujan_sum(q, m) - mobius(q)) for q in range(2, 101) for m in range(1, q)
              if math.gcd(m, q) == 1)
    ok = inv <= 1e-12 and tau <= 1e-12 and ram <= 1e-12 and gauss <= 1e-9
    assert criterion(10, ok, f"inversion {inv:.1e}, |tau| {tau:.1e}, Ramanujan {ram:.1e}, "
                             f"Gauss route {gauss:.1e}")


def test_criterion_11_superbound(zeros_126k, criterion):
    Xs = [10 ** e for e in (2, 2.5, 3, 3.5, 4)]
    parts, ok = [], True
    for m, q in ((1, 3), (2, 5), (1, 4)):
        tw = ModularTwist(m, q)
        vals = [superbound_parts(tw, B, X, zeros_126k) for X in Xs]
        slope = fit_exponent([(X, v["value"]) for X, v in zip(Xs, vals)]).slope
        dil = fit_exponent([(X, superbound_dilated(tw, B, X, zeros_126k)) for X in Xs]).slope
        ok &= slope <= 1.0
        if mobius(q) == 0:
            ok &= all(v["second"] == 0 for v in vals)
        parts.append(f"{m}/{q}: {slope:.3f} (dilated form {dil:.3f})")
    assert criterion(11, ok, "fitted exponents " + "; ".join(parts) + "; mu(4) = 0 second term exactly 0")


def test_criterion_12_determinism(tmp_path, criterion):
    runs = [
        ["--command", "zeros-find", "--height", "3000"],
        ["--command", "verify-explicit-formula", "--xgrid", "20"],
        ["--command", "verify-stationary-phase", "--xgrid", "100,200,400"],
        ["--command", "verify-theorem41"],
        ["--command", "verify-superbound", "--xi", "1/4", "--xgrid", "100,200,400,800"],
        ["--command", "verify-characters", "--qmax", "12", "--xgrid", "100"],
        ["--command", "verify-lemmas"],
    ]
    for w in (1, 8):
        for argv in runs:
            main(argv + ["--workers", str(w), "--out", str(tmp_path / f"w{w}")])
    csvs = sorted(p.name for p in (tmp_path / "w1").glob("*.csv"))
    same = [(tmp_path / "w1" / n).read_bytes() == (tmp_path / "w8" / n).read_bytes() for n in csvs]
    assert criterion(12, len(csvs) == len(runs) and all(same),
                     f"{sum(same)}/{len(csvs)} CSV files byte-identical across --workers 1 and 8")
