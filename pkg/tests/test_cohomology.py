from math import comb

import pytest
from hypothesis import given, settings, strategies as st

from dblquartic import cohomology
from dblquartic.cohomology import (
    Block,
    CohTable,
    LineBundle,
    NotComputableError,
    PushZ,
    coh_Pn,
    coh_Xt,
    coh_Z,
    hom_table,
    shift,
    unshift,
)

small = st.integers(-5, 5)


def _bott_oracle(n, k):
    """Independent count: monomials of degree k, or the Serre-dual count."""
    if k >= 0:
        return {0: comb(n + k, n)}
    if k <= -n - 1:
        return {n: comb(-k - 1, n)}
    return {}


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5), st.integers(-10, 10))
def test_bott_on_projective_space(n, k):
    assert coh_Pn(n, k) == _bott_oracle(n, k)


@settings(max_examples=40, deadline=None)
@given(small, small)
def test_product_is_kunneth(a, b):
    t = cohomology.coh_product(a, b)
    p1, p3 = coh_Pn(1, a), coh_Pn(3, b)
    assert t.euler() == p1.euler() * p3.euler()
    expected = {}
    for i, u in p1.dims:
        for j, v in p3.dims:
            expected[i + j] = expected.get(i + j, 0) + u * v
    assert t == expected


@pytest.mark.parametrize("space", ["P3", "P1xP3", "PF", "PE", "Xt"])
def test_serre_duality_of_the_oracle(space):
    assert cohomology.serre_violations(space, 4) == []


@pytest.mark.parametrize("id_,desc,fn,expected", cohomology.QUOTED_TABLES)
def test_quoted_tables(id_, desc, fn, expected):
    t = fn()
    assert t.exact
    assert t.as_dict() == expected


def test_double_fivefold_range():
    assert [cohomology.coh_X5(m).as_dict() for m in (0, -1, -2, -3)] == [{0: 1}, {}, {}, {}]


@settings(max_examples=60, deadline=None)
@given(small, small)
def test_line_bundles_are_exceptional(a, b):
    E = LineBundle(a, b)
    assert hom_table(E, E) == CohTable.of({0: 1})


@settings(max_examples=60, deadline=None)
@given(small, small, small, small)
def test_hom_between_line_bundles_depends_on_difference(a, b, c, d):
    assert hom_table(LineBundle(a, b), LineBundle(c, d)) == coh_Xt(c - a, d - b)


@settings(max_examples=40, deadline=None)
@given(small, small, st.integers(-3, 3), st.integers(-3, 3))
def test_shift_rule(a, b, m, n):
    E, F = LineBundle(0, 0), LineBundle(a, b)
    base = hom_table(E, F)
    t = hom_table(shift(E, m), shift(F, n))
    # Hom^i(E[m], F[n]) = Hom^(i+n-m)(E, F)
    assert t.as_dict() == {k - n + m: v for k, v in base.as_dict().items()}


def test_shift_composition():
    E = LineBundle(1, 2)
    assert shift(shift(E, 2), -2) == E
    assert unshift(shift(E, 3)) == (E, 3)
    with pytest.raises(ValueError):
        cohomology.Shift(cohomology.Shift(E, 1), 1)


def test_restriction_and_pushforward_homs():
    assert hom_table(LineBundle(0, 0), PushZ(0, 0)) == {0: 1}
    assert hom_table(PushZ(0, 0), PushZ(0, 0)) == CohTable.of({0: 1})
    assert hom_table(PushZ(1, 1), LineBundle(0, 2)) == {1: 1}


def test_pushz_self_homs_exact_and_simple_on_grid():
    for a in range(-3, 4):
        for b in range(-3, 4):
            t = hom_table(PushZ(a, b), PushZ(a, b))
            assert t.exact and t == {0: 1}


def test_blocks_are_not_computable():
    with pytest.raises(NotComputableError):
        hom_table(Block("B"), LineBundle(0, 0))
    with pytest.raises(NotComputableError):
        shift(Block("B"), 1)


def test_block_annotations_do_not_affect_identity():
    b = Block("B")
    assert b.annotate("moved") == b
    assert b.twist((1, 0)).annotations == ("twist(1, 0)",)


def test_table_arithmetic():
    t = CohTable.of({0: 2, 3: 1})
    assert t.euler() == 1
    assert t.shift(1) == {1: 2, 4: 1}
    assert (t + CohTable.of({0: 1}))[0] == 3
    assert not (t + CohTable.of({1: 1}, exact=False)).exact
    assert CohTable.of({0: 0}).is_zero()
    with pytest.raises(ValueError):
        CohTable.of({0: -1})
    assert str(CohTable.of({1: 1}, exact=False)) == "{1: 1} (upper bound)"


def test_exceptional_divisor_cohomology():
    assert coh_Z(0, 0) == {0: 1}
    assert coh_Z(2, -1).is_zero()


def test_suite_is_green():
    assert [r.id for r in cohomology.suite(3) if r.status != "pass"] == []
