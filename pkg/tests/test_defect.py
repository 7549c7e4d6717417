from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from dblquartic import defect
from dblquartic.chow import p3_bundle
from dblquartic.defect import Undetermined, build_en, defect_from_resolution, specialised_complex


def test_specialised_terms_match_display():
    c = specialised_complex()
    assert [sorted(t) for t in c.degrees()] == [sorted(t) for t in defect.DISPLAYED_TERMS]
    assert c.ranks() == (6, 15, 10)
    assert c.target_twist == 8


def test_defect_vanishes_and_verdict():
    d = defect_from_resolution(specialised_complex())
    assert d == 0
    v = defect.projectivity_verdict(d)
    assert v.status == "pass" and v.computed == "non-projective"


def test_euler_characteristic_two_ways():
    bott, hrr, target = defect.euler_two_ways(specialised_complex())
    assert bott == hrr == target == 93
    # chi(O(8)) on P3 minus the 72 nodes
    assert comb(11, 3) - 72 == 93


def test_negative_twist_control_is_undetermined():
    V = p3_bundle((-1, 0, 0, 1)).dual()
    d = defect_from_resolution(build_en(V, 2, -5))
    assert isinstance(d, Undetermined)
    assert "undetermined" in str(d)
    assert defect.projectivity_verdict(d).status == "inconclusive"


@pytest.mark.parametrize("r", range(2, 8))
def test_alternating_rank_sum(r):
    assert defect.rank_identity(r) == 1


@settings(max_examples=30, deadline=None)
@given(st.lists(st.integers(-2, 2), min_size=2, max_size=4), st.integers(0, 3), st.integers(-2, 2))
def test_resolution_ranks_and_target_for_any_split_bundle(degrees, L, extra):
    V = p3_bundle(degrees)
    r = V.rank
    c = build_en(V, L, extra)
    assert c.ranks() == (comb(r, 2), r * r - 1, comb(r + 1, 2))
    assert c.target_twist == (r - 1) * L + 2 * sum(degrees) + extra


def test_rank_one_refused():
    with pytest.raises(ValueError):
        build_en(p3_bundle((0,)), 1)


def test_suite_records():
    recs = {r.id: r for r in defect.suite()}
    assert [k for k, r in recs.items() if r.status == "fail"] == []
    assert recs["defect.depth-hypothesis"].status == "axiom"
