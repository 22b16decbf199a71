from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hierarchy_lab import gates as G
from hierarchy_lab.analysis import (
    CliffordTag,
    Verdict,
    check_controlled_conditions,
    check_dsum_conditions,
    classify_single_qubit_clifford,
    enumerate_single_qubit_cliffords,
    is_diagonal,
    parametrized_sets,
    predict_controlled_level,
    split_blocks,
)
from hierarchy_lab.pauli import PauliString

CLIFFORDS = enumerate_single_qubit_cliffords()


def s_o_member():
    # X * e^(i pi X/4) * e^(i pi Y/4)-style product: the odd-order family
    return G.product([G.rotation(G.pauli_x(), 2), G.rotation(G.pauli_y(), 2)])


def test_split_blocks():
    u1, u2 = G.t_gate(), G.hadamard()
    assert split_blocks(G.direct_sum(u1, u2)) == (u1, u2)
    assert split_blocks(G.cnot()) == (G.identity(1), G.pauli_x())
    assert split_blocks(G.tensor(G.hadamard(), G.identity(1))) is None


def test_controlled_t(engine):
    r = check_controlled_conditions(G.t_gate(), engine=engine)
    assert r.verdict is Verdict.PASSES_NECESSARY and r.passes
    assert r.m_found == 2 and r.pauli_power == PauliString.from_label("Z")
    assert r.order.value == 8 and r.order_is_pow2
    assert r.identity_m == 3 and r.half_power_is_nontrivial_pauli
    assert r.to_json()["verdict"] == "PassesNecessary"


def test_controlled_h_refinement_note(engine):
    r = check_controlled_conditions(G.hadamard(), engine=engine)
    assert r.verdict is Verdict.PASSES_NECESSARY and r.m_found == 1
    assert r.identity_m == 1 and r.half_power_is_pauli is False
    assert any("smallest-m refinement" in n for n in r.notes)


def test_controlled_odd_order(engine):
    r = check_controlled_conditions(s_o_member(), engine=engine)
    assert r.verdict is Verdict.FAILS_ORDER
    assert r.order.value == 3 and not r.order_is_pow2
    assert any("not a power of two" in n for n in r.notes)


def test_controlled_block_level_failure(engine):
    # diag(1, e^(i pi/32)) squares down to Z after 5 steps but sits at level 6
    u = G.rotation(G.pauli_z(), 6)
    r = check_controlled_conditions(u, cap=4, engine=engine)
    assert r.verdict is Verdict.FAILS_BLOCK_LEVEL and r.m_found == 5


def test_dsum_examples(engine):
    r = check_dsum_conditions(G.identity(1), G.hadamard(), engine=engine)
    assert r.verdict is Verdict.PASSES_NECESSARY and r.m_found == 1
    r = check_dsum_conditions(G.pauli_x(), G.pauli_y(), engine=engine)
    assert r.verdict is Verdict.PASSES_NECESSARY and r.m_found == 1 and r.sign_relation == 1
    r = check_dsum_conditions(G.identity(1), s_o_member(), engine=engine)
    assert r.verdict is Verdict.FAILS_PAULI_POWER and r.m_found is None
    r = check_dsum_conditions(G.identity(1), G.rotation(G.pauli_z(), 6), cap=4, engine=engine)
    assert r.verdict is Verdict.FAILS_BLOCK_LEVEL


def test_dsum_matches_controlled(engine):
    for u in (G.t_gate(), G.hadamard(), G.s_gate()):
        a = check_dsum_conditions(G.identity(1), u, engine=engine)
        b = check_controlled_conditions(u, engine=engine)
        assert a.verdict is b.verdict and a.m_found == b.m_found


def test_enumeration_is_24_distinct_cliffords():
    assert len(CLIFFORDS) == 24
    assert len({G.canonical_key(g) for g in CLIFFORDS}) == 24


def test_classification_histogram_and_orders():
    hist = Counter()
    for g in CLIFFORDS:
        cls = classify_single_qubit_clifford(g)
        hist[cls.tag] += 1
        order = G.order_projective(g).value
        if cls.tag is CliffordTag.HADAMARD_LIKE:
            assert order == 2
        elif cls.tag is CliffordTag.ORDER_FOUR:
            assert order == 4
        elif cls.tag is CliffordTag.ODD_ORDER:
            assert order % 2 == 1
        elif cls.tag is CliffordTag.PAULI:
            assert order in (1, 2)
    assert hist == {
        CliffordTag.PAULI: 4,
        CliffordTag.HADAMARD_LIKE: 6,
        CliffordTag.ORDER_FOUR: 3,
        CliffordTag.ODD_ORDER: 8,
        CliffordTag.UNLISTED: 3,
    }


def test_unlisted_members_are_inverse_quarter_turns():
    unlisted = [g for g in CLIFFORDS if classify_single_qubit_clifford(g).tag is CliffordTag.UNLISTED]
    inverses = [G.dagger(G.rotation(G.named(s), 2)) for s in "XYZ"]
    assert all(any(G.projective_equal(g, h) for h in inverses) for g in unlisted)


def test_parametrized_sets_are_cliffords_with_expected_orders():
    sets = parametrized_sets()
    assert len(sets[CliffordTag.HADAMARD_LIKE]) == 6
    assert len(sets[CliffordTag.ODD_ORDER]) == 24
    for _, g in sets[CliffordTag.ODD_ORDER]:
        assert G.order_projective(g).value == 3


def test_classify_rejects():
    with pytest.raises(ValueError):
        classify_single_qubit_clifford(G.cnot())
    assert classify_single_qubit_clifford(G.t_gate()).tag is CliffordTag.NOT_CLIFFORD


def test_soundness_of_necessity_on_cliffords(engine):
    # a decided controlled level implies the necessary conditions hold
    for g in CLIFFORDS:
        pred = predict_controlled_level(g, engine=engine)
        if pred.measured.decided:
            assert pred.report.passes
        if pred.report.verdict is Verdict.FAILS_ORDER:
            assert pred.measured.not_within_cap


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**30))
def test_soundness_of_necessity_random(seed):
    from hierarchy_lab.hierarchy import HierarchyEngine

    eng = HierarchyEngine()
    u = G.random_gate(1, 4, seed)
    pred = predict_controlled_level(u, cap=4, engine=eng)
    if pred.measured.decided:
        assert pred.report.passes


def test_refinement_consistency(engine):
    for g in CLIFFORDS + [G.t_gate(), G.rotation(G.pauli_z(), 4)]:
        r = check_controlled_conditions(g, engine=engine)
        if r.identity_m is not None:
            assert G.is_identity_projective(G.power(g, 1 << r.identity_m))
            assert not G.is_identity_projective(G.power(g, 1 << (r.identity_m - 1))) or r.identity_m == 1
            assert r.m_found is not None and r.m_found <= r.identity_m


def test_prediction_examples(engine):
    p = predict_controlled_level(G.hadamard(), engine=engine)
    assert p.prediction == 3 and p.measured.level == 3 and p.matches
    p = predict_controlled_level(G.t_gate(), engine=engine)
    assert p.prediction == 4 and p.measured.level == 4
    p = predict_controlled_level(G.identity(1), engine=engine)
    assert p.prediction == 2 and p.measured.level == 1 and p.matches is False
    assert p.to_json()["prediction_is_conjecture"] is True


def test_is_diagonal():
    assert is_diagonal(G.t_gate()) and is_diagonal(G.cz())
    assert not is_diagonal(G.hadamard())
