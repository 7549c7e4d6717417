import pytest
from hypothesis import given, settings, strategies as st

from dblquartic import mutation
from dblquartic.cohomology import Block, LineBundle, PushZ, shift
from dblquartic.mutation import (
    DISPLAYED,
    FINAL,
    Collection,
    RuleNotApplicable,
    collection_defects,
    k_lattice,
    mutate_block,
    mutate_exceptional,
    numerical_defects,
    run_step,
    serre_shuttle,
    start_collection,
    transpose_orthogonal,
    twist_all,
    verify_figure1,
)


@pytest.fixture(scope="module")
def replay():
    return verify_figure1()


def test_all_eight_steps_certified(replay):
    assert [r.step for r in replay] == list(range(1, 9))
    assert all(r.certified for r in replay), [r.failure for r in replay]
    assert mutation.replay_complete(replay)


@pytest.mark.parametrize("step", range(1, 9))
def test_each_step_matches_displayed_collection(replay, step):
    rep = replay[step - 1]
    assert rep.matches_display
    assert rep.output.unshifted_objects() == list(DISPLAYED[step])
    assert rep.k_check
    assert rep.collection_ok


def test_final_collection(replay):
    final = mutation.final_collection(replay)
    assert final.unshifted_objects() == list(FINAL)
    assert [str(b) for b in final.blocks()] == [mutation.CLIFFORD_BLOCK]


@pytest.mark.parametrize("step", sorted(mutation.LATTICE_PRESERVING))
def test_lattice_preserved_on_mutation_steps(replay, step):
    rep = replay[step - 1]
    assert k_lattice(rep.input) == k_lattice(rep.output)
    assert "class lattice preserved" in rep.notes


def test_start_collection_is_exceptional():
    c = start_collection()
    assert collection_defects(c) == []
    assert numerical_defects(c) == []


def test_misdeclared_divisor_is_refused_at_step_three():
    reps = verify_figure1(divisor=(1, 1))
    assert reps[-1].step == 3
    assert not reps[-1].certified
    assert "cone not evaluable" in reps[-1].failure


def test_single_step_report_serialises(replay):
    d = replay[2].to_dict()
    assert d["step"] == 3 and d["certified"]
    assert all("dims" in h for h in d["homs"])


def test_collection_after_refuses_past_failure():
    with pytest.raises(RuleNotApplicable):
        mutation.collection_after(4, divisor=(1, 1))


def test_transpose_needs_orthogonality_both_ways():
    c = Collection.of([LineBundle(0, 0), LineBundle(1, -2)])
    out, rec = transpose_orthogonal(c, 0)
    assert out.entries == (LineBundle(1, -2), LineBundle(0, 0))
    assert [h.table.is_zero() for h in rec.homs] == [True, True]
    # Hom(O(-2h), O(H)) != 0, so not orthogonal
    bad = Collection.of([LineBundle(0, -2), LineBundle(1, 0)])
    with pytest.raises(RuleNotApplicable):
        transpose_orthogonal(bad, 0)


def test_section_rule_and_inverse():
    c = Collection.of([LineBundle(0, 0), LineBundle(1, -1)])
    left, rec = mutate_exceptional(c, 0, "left")
    assert rec.rule == "section" and rec.k_check
    assert left.unshifted_objects() == [PushZ(1, -1), LineBundle(0, 0)]
    back, rec2 = mutate_exceptional(left, 0, "right")
    assert back.unshifted_objects() == c.unshifted_objects()
    assert rec2.k_check


def test_orthogonal_mutation_is_a_swap():
    c = Collection.of([LineBundle(0, 0), LineBundle(1, -2)])
    out, rec = mutate_exceptional(c, 0, "left")
    assert rec.rule == "orthogonal"
    assert out.unshifted_objects() == [LineBundle(1, -2), LineBundle(0, 0)]


def test_unknown_cone_is_refused():
    c = Collection.of([LineBundle(0, 0), LineBundle(1, 0)])
    with pytest.raises(RuleNotApplicable) as exc:
        mutate_exceptional(c, 0, "left")
    assert exc.value.table is not None


def test_blocks_cannot_be_mutated_as_objects():
    c = Collection.of([Block("B"), LineBundle(0, 0)])
    with pytest.raises(RuleNotApplicable):
        mutate_exceptional(c, 0, "left")
    with pytest.raises(RuleNotApplicable):
        mutate_block(c, 1, "left")
    with pytest.raises(RuleNotApplicable):
        mutate_block(c, 0, "left")
    out, rec = mutate_block(c, 0, "right")
    assert out.entries[0] == LineBundle(0, 0) and isinstance(out.entries[1], Block)


def test_serre_shuttle_twists_by_canonical_class():
    c = Collection.of([LineBundle(0, 0), LineBundle(0, 1), LineBundle(0, 2)])
    out, rec = serre_shuttle(c, 2, "to-left")
    assert out.entries[0] == LineBundle(-2, 0)
    assert rec.k_check
    back, _ = serre_shuttle(out, 0, "to-right")
    assert back == c
    with pytest.raises(RuleNotApplicable):
        serre_shuttle(c, 1, "to-left")


def test_shifted_entries_keep_their_shift_through_mutation():
    c = Collection.of([LineBundle(0, 0), shift(LineBundle(1, -1), 2)])
    out, rec = mutate_exceptional(c, 0, "left")
    assert out.entries[0] == shift(PushZ(1, -1), 2)
    assert rec.k_check


@settings(max_examples=20, deadline=None)
@given(st.integers(-3, 3), st.integers(-3, 3))
def test_twisting_a_collection_preserves_exceptionality(a, b):
    c = twist_all(start_collection(), (a, b))
    assert collection_defects(c) == []
    assert twist_all(c, (-a, -b)).unshifted_objects() == start_collection().unshifted_objects()


def test_run_step_on_wrong_input_does_not_certify():
    rep = run_step(start_collection(), 3)
    assert not rep.certified


def test_special_resolution_ledger():
    steps = mutation.verify_special_steps()
    assert [s.step for s in steps] == [1, 2, 3, 4]
    assert all(s.ok for s in steps)
    used = {a for s in steps for a in s.axioms}
    assert used == set(mutation.AXIOMS)
    assert all(mutation.special_identities().values())


def test_ledger_normalisation_absorbs_base_twists():
    obj = mutation.LedgerObject("exc", (2, 0, 2))
    assert obj.normalized() == mutation.LedgerObject("exc", (0, 0, 0))
    assert str(mutation.LedgerObject("line", (1, -1, 0))) == "O(xi)"


def test_suite_has_no_failures():
    records = mutation.suite()
    assert [r.id for r in records if r.status == "fail"] == []
    assert sum(r.status == "axiom" for r in records) == 3
