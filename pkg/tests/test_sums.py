import cmath
import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from zpd.arith import ModularTwist, characters_mod, mangoldt_sieve, quadratic_character
from zpd.bump import BumpFunction
from zpd.errors import IncompleteTableError, InputError, PreconditionError
from zpd.sums import (ExperimentSpec, aloevera_defect, character_sum, character_sum_via_gauss,
                      dyadic_assemble, explicit_formula_residual, explicit_formula_terms,
                      fit_exponent, prime_side, superbound_functional, superbound_parts,
                      theorem41_defect, untwisted_sum, zero_side)

B = BumpFunction.canonical()
LAM = mangoldt_sieve(10**5)


def naive_prime_side(xi, bump, X):
    tot = 0j
    for n in range(1, int(bump.b * X) + 2):
        if LAM[n]:
            tot += LAM[n] * cmath.exp(-2j * math.pi * ((n * xi.numerator % xi.denominator) / xi.denominator)) \
                * float(bump(n / X))
    return tot


def test_prime_side_against_naive_loop():
    xi = Fraction(1, 3)
    v = prime_side(ModularTwist(1, 3), B, 50.0).value
    assert abs(v - naive_prime_side(xi, B, 50.0)) < 1e-12


def test_prime_side_with_float_xi_close_to_rational():
    a = prime_side(1 / 3, B, 300.0).value
    b = prime_side(ModularTwist(1, 3), B, 300.0).value
    assert abs(a - b) < 1e-10


def test_empty_window():
    # [114, 119.7] holds no prime power
    thin = BumpFunction.canonical(1.0, 1.05)
    r = prime_side(ModularTwist(1, 3), thin, 114.0)
    assert r.value == 0 and r.n_terms == 0


def test_xi_zero_is_untwisted():
    assert prime_side(0.0, B, 80.0).value == untwisted_sum(B, 80.0).value


@pytest.mark.parametrize("m,q", [(1, 3), (2, 5), (3, 7), (1, 4)])
def test_conjugate_pair(m, q):
    a = prime_side(ModularTwist(m, q), B, 200.0).value
    b = prime_side(ModularTwist(q - m, q), B, 200.0).value
    assert abs(a - b.conjugate()) < 1e-12


def test_precondition():
    with pytest.raises(PreconditionError):
        prime_side(ModularTwist(1, 3), B, 9.0)


def test_zero_side_against_naive_loop(zeros_700):
    X, xi = 50.0, 1 / 3
    s = 2 * math.pi * xi * X
    ref = 0j
    for e in zeros_700.entries:
        if s < e.gamma < 2 * s:
            ref += xi ** -0.5 * cmath.exp(-1j * e.gamma * math.log(xi)) * e.phase * float(B(e.gamma / s))
    assert abs(zero_side(ModularTwist(1, 3), B, X, zeros_700).value - ref) < 1e-11


def test_zero_side_truncation_is_exact(zeros_700):
    small = zeros_700.truncated(2 * math.pi / 3 * 50 * 2 + 1)
    a = zero_side(ModularTwist(1, 3), B, 50.0, small).value
    b = zero_side(ModularTwist(1, 3), B, 50.0, zeros_700).value
    assert a == b


def test_zero_side_needs_height(zeros_700):
    with pytest.raises(IncompleteTableError):
        zero_side(ModularTwist(1, 3), B, 400.0, zeros_700)


def test_zero_side_below_first_zero(zeros_700):
    thin = BumpFunction.canonical(0.2, 0.3)
    assert zero_side(0.5, thin, 10.5, zeros_700).value == 0


def test_explicit_formula_spot(zeros_700):
    r = explicit_formula_terms(ModularTwist(1, 3), B, 20.0, zeros_700, tol=1e-7)
    assert abs(r.residual) < 1e-6
    assert abs(r.residual) <= 1e-7 + r.budget


def test_explicit_formula_zero_bump(zeros_700):
    assert explicit_formula_residual(ModularTwist(1, 3), BumpFunction.canonical(amplitude=0.0),
                                     20.0, zeros_700) == 0


def test_explicit_formula_table_too_short(zeros_700):
    with pytest.raises(IncompleteTableError) as exc:
        explicit_formula_residual(ModularTwist(1, 3), B, 40.0, zeros_700.truncated(300.0), tol=1e-9)
    assert exc.value.required_height > 300


def test_superbound_mu_zero_second_term(zeros_21k):
    p = superbound_parts(ModularTwist(1, 4), B, 100.0, zeros_21k)
    assert p["second"] == 0
    assert superbound_functional(ModularTwist(1, 4), B, 100.0, zeros_21k) == p["zero_sum"]


def test_superbound_second_term(zeros_21k):
    p = superbound_parts(ModularTwist(1, 3), B, 100.0, zeros_21k)
    assert p["second"] == pytest.approx(-0.5 * untwisted_sum(B, 100.0).value)


def test_theorem41_defect_small_grid(zeros_21k):
    spec = ExperimentSpec(ModularTwist(1, 3), B, (50, 100, 200), zeros_21k)
    rows, fit = theorem41_defect(spec)
    assert len(rows) == 3 and fit.slope < 1.0


def test_experiment_spec_validation(zeros_21k):
    with pytest.raises(InputError):
        ExperimentSpec(ModularTwist(1, 3), B, (100, 50), zeros_21k)
    with pytest.raises(PreconditionError):
        ExperimentSpec(ModularTwist(1, 3), B, (5, 50), zeros_21k)
    with pytest.raises(InputError):
        theorem41_defect(ExperimentSpec(ModularTwist(1, 3), B, (50,), zeros_21k))


def test_aloevera_q2():
    X = 100.0
    d = aloevera_defect(ModularTwist(1, 2), B, X)
    ns = [n for n in range(100, 201) if LAM[n]]
    ref = sum(LAM[n] * (-1) ** n * float(B(n / X)) for n in ns) + sum(LAM[n] * float(B(n / X)) for n in ns)
    assert abs(d - ref) < 1e-11


def test_aloevera_zero_bump():
    assert aloevera_defect(ModularTwist(1, 3), BumpFunction.canonical(amplitude=0.0), 50.0) == 0


def test_quadratic_mod5_routes_agree():
    chi = quadratic_character(5)
    a = character_sum(chi, B, 100.0).value
    b = character_sum_via_gauss(chi, B, 100.0).value
    assert abs(a - b) < 1e-9 * (1 + abs(a))


@pytest.mark.parametrize("q", [3, 4, 5, 7, 8, 11])
def test_odd_characters_need_no_sign(q):
    for chi in characters_mod(q):
        if chi.is_primitive and chi.parity == -1:
            a = character_sum(chi, B, 300.0).value
            b = character_sum_via_gauss(chi, B, 300.0).value
            c = character_sum_via_gauss(chi, B, 300.0, printed_sign=True).value
            assert abs(a - b) < 1e-9 * (1 + abs(a))
            assert abs(a + c) < 1e-9 * (1 + abs(a))


def test_gauss_route_needs_primitive():
    with pytest.raises(PreconditionError):
        character_sum_via_gauss(characters_mod(12)[1], B, 100.0)


def test_principal_character_drops_ramified_terms():
    chi = characters_mod(6)[0]
    X = 100.0
    direct = character_sum(chi, B, X).value
    ram = sum(LAM[n] * float(B(n / X)) for n in range(100, 201) if LAM[n] and math.gcd(n, 6) > 1)
    assert direct == pytest.approx(untwisted_sum(B, X).value - ram, abs=1e-11)


def test_dyadic_assembly_majorises():
    P = BumpFunction.plateau()
    chi = characters_mod(1)[0]
    r = dyadic_assemble(chi, P, 1000.0)
    psi = sum(LAM[n] for n in range(1, 1001))
    assert r.direct.real == pytest.approx(psi, rel=1e-12)
    assert r.value.real >= psi
    assert all(p["majorized"] for p in r.pieces)
    assert len(dyadic_assemble(chi, P, 1.5).pieces) == 1
    with pytest.raises(PreconditionError):
        dyadic_assemble(chi, B, 100.0)


def test_fit_exponent():
    Xs = [10.0, 100.0, 1000.0, 10000.0]
    assert fit_exponent([(X, X ** 0.9) for X in Xs]).slope == pytest.approx(0.9, abs=1e-12)
    assert fit_exponent([(X, 3.0) for X in Xs]).slope == pytest.approx(0.0, abs=1e-12)
    f = fit_exponent([(X, X ** 0.5) for X in Xs] + [(1e5, 0.0)])
    assert f.dropped == 1 and f.slope == pytest.approx(0.5, abs=1e-12)
    with pytest.raises(InputError):
        fit_exponent([(10.0, 1.0), (20.0, 2.0)])


@given(st.floats(min_value=0.5, max_value=2.0), st.floats(min_value=-3, max_value=3))
def test_fit_recovers_power_law(c, p):
    Xs = [50.0, 100.0, 200.0, 400.0]
    assert fit_exponent([(X, c * X ** p) for X in Xs]).slope == pytest.approx(p, abs=1e-9)
