import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from zpd.errors import (CacheChecksumError, CacheError, CacheVersionError, IncompleteTableError,
                        InputError, TableParseError)
from zpd.zeros.cache import cache_load, cache_store
from zpd.zeros.hardy import HeightCeilingWarning, hardy_Z
from zpd.zeros.search import find_zeros, sign_change_count
from zpd.zeros.table import ZeroTable, count_N, ingest_zero_table, s_of_T, zeta_phase
from zpd.zeros.theta import gram_point, theta

# mpmath.siegeltheta / siegelz at 30 digits
THETA = {5.0: -3.4596203753634625332, 50.0: 26.461366070161409647, 1000.5: 2035.8139600703492806}
HARDY = {20.5: 0.59932870251475132139, 500.3: 0.038922704789040118796,
         5000.7: 0.41568649668100512813, 50000.1: 2.8163125235897205579}


@pytest.mark.parametrize("t,expected", sorted(THETA.items()))
def test_theta_matches_mpmath(t, expected):
    assert theta(t) == pytest.approx(expected, abs=1e-11)


@pytest.mark.parametrize("t,expected", sorted(HARDY.items()))
def test_hardy_z_matches_mpmath(t, expected):
    assert hardy_Z(t) == pytest.approx(expected, abs=2e-10)


def test_hardy_z_warns_above_ceiling():
    with pytest.warns(HeightCeilingWarning):
        hardy_Z(2e5)


@pytest.mark.parametrize("n", [0, 1, 10, 1000])
def test_gram_points_solve_theta(n):
    g = gram_point(n)
    assert theta(g) == pytest.approx(n * math.pi, abs=1e-9)


def test_first_zeros_match_reference(reference_zeros):
    t = find_zeros(240.0)
    assert len(t) >= 100
    assert np.max(np.abs(t.gamma[:100] - reference_zeros.gamma)) < 1e-8


def test_count_at_100():
    t = find_zeros(100.0)
    assert len(t) == 29
    assert count_N(100.0, t) == 29


def test_zero_count_matches_sign_change_scan():
    t = find_zeros(200.0)
    assert len(t) == sign_change_count(200.0, step=0.005)


def test_find_zeros_refuses_above_ceiling():
    with pytest.raises(InputError):
        find_zeros(2e5)


def test_count_half_weight_at_ordinate(zeros_700):
    g = zeros_700.gamma[4]
    assert count_N(g, zeros_700) == 4.5


def test_count_outside_table(zeros_700):
    with pytest.raises(IncompleteTableError):
        count_N(800.0, zeros_700)
    with pytest.raises(InputError):
        count_N(0.0, zeros_700)


@given(st.floats(min_value=1.0, max_value=690.0))
def test_counting_identity(T):
    t = _cached_700()
    assert count_N(T, t) == pytest.approx(1 + theta(T) / math.pi + s_of_T(T, t), abs=1e-10)


_T700 = []


def _cached_700():
    if not _T700:
        _T700.append(find_zeros(700.0))
    return _T700[0]


def test_phases_are_unit_and_match_theta(zeros_700):
    for e in zeros_700.entries[:50]:
        assert abs(e.phase) == pytest.approx(1.0, abs=1e-14)
        # the one-sided limit coincides with exp(2 i theta(gamma))
        assert abs(e.phase - np.exp(2j * theta(e.gamma))) < 1e-9
        assert zeta_phase(e, zeros_700) == pytest.approx(e.phase)


def test_phase_law_first_zero(zeros_700):
    e = zeros_700.entries[0]
    g = e.gamma
    approx = np.exp(2j * math.pi * (g / (2 * math.pi) * math.log(g / (2 * math.pi * math.e)) + 7 / 8))
    assert g * abs(e.phase - approx) < 10


def test_s_is_small_on_first_zeros(zeros_700):
    assert np.all(np.abs(zeros_700.s_at_gamma) < 2)


def test_ingest_and_repeated_ordinates(tmp_path):
    p = tmp_path / "t.txt"
    p.write_text("# comment\n14.134725141734693790\n\n21.022039638771554993\n21.022039638771554993\n")
    t = ingest_zero_table(p)
    assert t.source == "ingested"
    assert len(t) == 2
    assert list(t.multiplicity) == [1, 2]
    assert t.height_max == pytest.approx(21.022039638771554993)


def test_ingest_empty(tmp_path):
    p = tmp_path / "e.txt"
    p.write_text("# nothing\n")
    t = ingest_zero_table(p)
    assert len(t) == 0 and t.height_max == 0.0


@pytest.mark.parametrize("body,line", [("21.0\n14.1\n", 2), ("14.1\nabc\n", 2), ("-3\n", 1)])
def test_ingest_errors_name_the_line(tmp_path, body, line):
    p = tmp_path / "bad.txt"
    p.write_text(body)
    with pytest.raises(TableParseError) as exc:
        ingest_zero_table(p)
    assert exc.value.line == line


def test_cache_roundtrip(tmp_path, zeros_700):
    p = tmp_path / "z.cache"
    cache_store(p, zeros_700)
    back = cache_load(p)
    assert back == zeros_700
    assert np.array_equal(back.gamma, zeros_700.gamma)
    assert back.height_max == zeros_700.height_max


def test_cache_detects_damage(tmp_path, zeros_700):
    p = tmp_path / "z.cache"
    cache_store(p, zeros_700)
    text = p.read_text()
    lines = text.splitlines(keepends=True)
    (tmp_path / "trunc.cache").write_text("".join(lines[:-5]))
    with pytest.raises(CacheChecksumError):
        cache_load(tmp_path / "trunc.cache")
    flipped = text.replace(lines[3], lines[3].replace("1", "2", 1))
    (tmp_path / "flip.cache").write_text(flipped)
    with pytest.raises(CacheChecksumError):
        cache_load(tmp_path / "flip.cache")
    (tmp_path / "ver.cache").write_text(text.replace(" v1 ", " v9 ", 1))
    with pytest.raises(CacheVersionError):
        cache_load(tmp_path / "ver.cache")
    (tmp_path / "junk.cache").write_text("hello\n")
    with pytest.raises(CacheError):
        cache_load(tmp_path / "junk.cache")
    with pytest.raises(FileNotFoundError):
        cache_load(tmp_path / "missing.cache")


def test_table_truncation_and_validation(zeros_700):
    t = zeros_700.truncated(100.0)
    assert len(t) == 29 and t.height_max == 100.0
    with pytest.raises(InputError):
        ZeroTable([3.0, 2.0], 10.0)
    with pytest.raises(InputError):
        ZeroTable([3.0, 20.0], 10.0)


def test_worker_count_does_not_change_zeros():
    a = find_zeros(3000.0, workers=1)
    b = find_zeros(3000.0, workers=3)
    assert np.array_equal(a.gamma, b.gamma)
