import math

import pytest

from helix.cartan_roots import build_cartan
from helix.restriction import (
    arrangement, nearest_lines, node_length, primitive_direction, restrict, restricted_roots,
    root_classes_mod_delta, selection,
)


def test_default_node_is_max_mark():
    assert selection("D4t").node == 4
    assert selection("E8t").length == 6
    assert selection("A1t").delta_bar == (1, 1)


def test_node_validation():
    with pytest.raises(IndexError):
        selection("D4t", 0)
    with pytest.raises(IndexError):
        selection("D4t", 5)
    with pytest.raises(ValueError):
        restrict((1, 2), selection("D4t"))


def test_node_length_center():
    assert node_length(build_cartan("D4t"), 4) == 2


def test_a1_shape():
    rr = restricted_roots(selection("A1t"), 20)
    expected = {(a, b) for a in range(-20, 21) for b in range(-20, 21)
                if (a, b) != (0, 0) and abs(a - b) <= 1 and max(abs(a), abs(b)) <= 10}
    got = {u for u in rr.roots if max(abs(u[0]), abs(u[1])) <= 10}
    assert got == expected


def test_sign_closed():
    rr = restricted_roots(selection("D4t"), 20)
    s = set(rr.roots)
    assert all((-a, -b) in s for a, b in s)


@pytest.mark.parametrize("label", ["A1t", "D4t", "D5t", "E6t", "E7t"])
def test_class_count_is_twice_length(label):
    sel = selection(label)
    rep = root_classes_mod_delta(sel, 30)
    assert rep.stable
    assert len(rep) == 2 * sel.length


def test_class_representatives():
    assert root_classes_mod_delta(selection("A1t"), 20).representatives == [(0, 1), (1, 0)]
    assert root_classes_mod_delta(selection("D4t"), 20).representatives == [(0, 1), (1, 0), (0, 2), (1, 1)]


def test_translation_closure_interior():
    sel = selection("D4t")
    rr = restricted_roots(sel, 60)
    inner = restricted_roots(sel, 20)
    db = sel.delta_bar
    for u in inner.roots:
        if u[0] == 0 and u[1] == 0:
            continue
        for k in (-2, -1, 1, 2):
            v = (u[0] + k * db[0], u[1] + k * db[1])
            if v != (0, 0):
                assert v in rr


def test_primitive_direction():
    assert primitive_direction((-2, -4)) == (1, 2)
    assert primitive_direction((0, -3)) == (0, 1)


def test_arrangement_accumulates_at_delta_bar():
    sel = selection("D4t")
    near = []
    for b in (20, 40, 80):
        lo, hi = nearest_lines(arrangement(sel, b))
        near.append(min(lo, hi))
    assert near[0] > near[1] > near[2] > 0
    t0 = math.atan2(2, 1)
    arr = arrangement(sel, 80)
    assert len(arr.lines_in_sector(t0 - 0.05, t0 + 0.05)) > len(arr.lines_in_sector(0.2, 0.3))
