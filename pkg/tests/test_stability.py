import math
import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from helix.restriction import selection
from helix.stability import (
    CentralCharge, DegenerateChargeError, all_phases, classify_charge, find_phase_gap,
    parse_charge, phase, phases, same_phase, scan_outliers, tail_certificate,
)


def test_parse_charge():
    z = parse_charge("1/2+3i,-i")
    assert z.z0 == (F(1, 2), F(3)) and z.z1 == (F(0), F(-1))
    assert parse_charge("i,i").z0 == (0, 1)
    with pytest.raises(ValueError):
        parse_charge("1+i")
    with pytest.raises(ValueError):
        parse_charge("x,1")


@pytest.mark.parametrize("text,tag", [("1,-1", "degenerate"), ("-1+i,1+i", "discrete"), ("i,i", "dense_line")])
def test_trichotomy(text, tag):
    assert classify_charge(parse_charge(text)) == tag


def test_degenerate_raises():
    with pytest.raises(DegenerateChargeError) as e:
        phases(parse_charge("1,-1"), selection("A1t"), 10)
    assert e.value.killed == (1, 1)


def test_phase_range():
    assert phase(1) == 2.0
    assert phase(-1) == 1.0
    assert phase(1j) == pytest.approx(0.5)
    assert phase(-1j) == pytest.approx(1.5)


@settings(max_examples=80, deadline=None)
@given(st.floats(-10, 10), st.floats(-10, 10))
def test_phase_in_half_open_interval(x, y):
    if abs(complex(x, y)) < 1e-9:
        return
    p = phase(complex(x, y))
    assert 0 < p <= 2
    assert math.isclose(math.cos(math.pi * p) * abs(complex(x, y)), x, abs_tol=1e-6)


def test_same_phase_exact():
    z = parse_charge("-1+i,1+i")
    assert same_phase(z, (1, 1), (2, 2))
    assert not same_phase(z, (1, 1), (-1, -1))


def test_a1_gap():
    g = find_phase_gap(parse_charge("-1+i,1+i"), selection("A1t"), 40)
    assert g.kind == "gap" and g.stable
    assert g.phi == pytest.approx(0.75) and g.epsilon == pytest.approx(0.5)


def test_dense_line_gap():
    g = find_phase_gap(parse_charge("i,i"), selection("A1t"), 20)
    assert g.kind == "integer_spaced" and g.epsilon is None


def test_dense_line_phases_are_integer_spaced():
    ph = all_phases(parse_charge("i,i"), selection("A1t"), 20)
    assert all(abs((p - 0.5) - round(p - 0.5)) < 1e-9 for p in ph)


def _random_charge(rng):
    r = lambda: F(rng.randint(-9, 9), rng.randint(1, 5))
    return CentralCharge((r(), r()), (r(), r()))


def test_tail_certificate_matches_scan():
    sel = selection("D4t")
    rng = random.Random(11)
    checked = 0
    while checked < 15:
        z = _random_charge(rng)
        if classify_charge(z, sel, 30) != "discrete":
            continue
        cert = tail_certificate(z, sel, 30, eta=1e-3)
        for r, (lo, hi) in cert.outliers.items():
            scan = scan_outliers(z, sel, r, 3000, 1e-3)
            assert scan == list(range(lo, hi + 1))
        checked += 1


def test_translates_approach_accumulation():
    z = parse_charge("-1+i,1+i")
    sel = selection("D4t")
    db = sel.delta_bar
    acc = phases(z, sel, 30).accumulation
    cert = tail_certificate(z, sel, 30)
    for r in cert.classes:
        dists = []
        for k in (10, 100, 1000, 10000):
            p = phase(z((r[0] + k * db[0], r[1] + k * db[1])))
            dists.append(min(abs(p - a) for a in acc))
        assert dists == sorted(dists, reverse=True) and dists[-1] < 1e-4
