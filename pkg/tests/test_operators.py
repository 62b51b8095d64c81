import math

import pytest

from zpd.bump import BumpFunction
from zpd.errors import DomainError
from zpd.operators import (OperatorExpansion, apply_L, class_after, dl_power,
                           envelope_bound, eval_expansion)


def test_apply_L_on_base():
    e = apply_L(OperatorExpansion.base(3.0))
    assert e.terms == {(1, 0, 1): 1}


@pytest.mark.parametrize("k", range(0, 5))
def test_class_after_k_steps(k):
    e = dl_power(k, 3.0)
    assert e.cls == class_after(k)
    assert e.in_class()
    assert e.max_coefficient() <= math.factorial(k) * 3 ** k


def test_coefficients_do_not_depend_on_u0():
    assert dl_power(3, 0.2).terms == dl_power(3, 3.0).terms


def test_k1_matches_finite_difference():
    B = BumpFunction.canonical()
    u0, h = 3.0, 1e-5
    g = lambda u: float(B(u)) / math.sqrt(u)
    Lg = lambda u: u * g(u) / (u0 - u)
    for u in (1.2, 1.5, 1.8):
        fd = (Lg(u + h) - Lg(u - h)) / (2 * h)
        assert eval_expansion(dl_power(1, u0), B, u) == pytest.approx(fd, rel=1e-6)


def test_pole_and_domain_errors():
    B = BumpFunction.canonical()
    with pytest.raises(DomainError):
        eval_expansion(dl_power(1, 1.5), B, 1.5)
    with pytest.raises(DomainError):
        dl_power(9, 1.0)


@pytest.mark.parametrize("u0", [0.2, 3.0])
@pytest.mark.parametrize("k", [1, 2, 3])
def test_envelope_bound_stable(u0, k):
    r = envelope_bound(BumpFunction.canonical(), u0, k)
    assert r["finite"] and math.isfinite(r["bound"])
    assert r["spread"] < 10
    rl = envelope_bound(BumpFunction.canonical(), u0, k, leading_L=True)
    assert math.isfinite(rl["bound"])
