import pytest
from hypothesis import given, settings, strategies as st

from dblquartic import localgeom
from dblquartic.localgeom import LocalModel, exact_rank, jacobian_survey, symbolic_certificate


def test_corrected_change_reaches_displayed_equation():
    src, dst = localgeom.section_equation(), localgeom.moved_equation()
    assert localgeom.corrected_change(src) == dst


def test_literal_change_leaves_residual():
    R = localgeom.local_ring()
    x0, y0, y3 = R.gen("x0"), R.gen("y0"), R.gen("y3")
    src, dst = localgeom.section_equation(), localgeom.moved_equation()
    assert localgeom.literal_change(src) - dst == -3 * x0 * y0 * y3


def test_coordinate_change_records():
    assert all(r.status == "pass" for r in localgeom.coordinate_change_check())


@pytest.mark.parametrize("p", [7, 11, 13])
def test_fiber_over_origin_is_smooth(p):
    res = jacobian_survey(LocalModel(), p)
    assert res.points and res.smooth


@pytest.mark.parametrize("p", [7, 11])
def test_degenerate_binary_form_is_singular(p):
    assert not jacobian_survey(LocalModel({"b11": 0, "b12": 0, "b22": 0}), p).smooth


@settings(max_examples=25, deadline=None)
@given(st.integers(-4, 4), st.integers(-4, 4), st.integers(-4, 4))
def test_nondegenerate_forms_give_smooth_fibers(b11, b12, b22):
    model = LocalModel({"b11": b11, "b12": b12, "b22": b22})
    ok, _ = symbolic_certificate(model)
    if model.gram_determinant() % 7 != 0:
        assert ok
        assert jacobian_survey(model, 7).smooth


def test_symbolic_certificate_refuses_degenerate_form():
    ok, text = symbolic_certificate(LocalModel({"b11": 1, "b12": 2, "b22": 1}))
    assert not ok and "degenerate" in text


def test_tangent_cone():
    rows = [[1 if i == j else 0 for j in range(6)] for i in range(5)]
    assert localgeom.tangent_cone_rank(rows).computed == "node"
    rows[4] = rows[3]
    r = localgeom.tangent_cone_rank(rows)
    assert r.computed == "worse than node" and r.status == "fail"
    with pytest.raises(ValueError):
        localgeom.tangent_cone_rank(rows[:4])


def test_exact_rank():
    assert exact_rank([[1, 2], [2, 4]]) == 1
    assert exact_rank([[1, 2], [3, 4]]) == 2
    assert exact_rank([]) == 0


def test_suite_is_green():
    assert [r.id for r in localgeom.suite() if r.status != "pass"] == []
