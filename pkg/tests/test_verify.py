import json

import pytest

from hierarchy_lab import gates as G
from hierarchy_lab.gates import Gate
from hierarchy_lab.hierarchy import ResourceGuardError
from hierarchy_lab.verify import (
    SuiteReport,
    descent_closed_form,
    run_suite,
    verify_block_identities,
    verify_descent_chain,
    verify_descent_pairs,
    verify_lemma1,
)


def test_lemma1_suite():
    r = verify_lemma1(samples=20, seed=3)
    assert r.passed and r.cases_run == 8 + 32 + 20  # forward, reverse (same block +-i, distinct +-), random
    assert r.params == {"n": 2, "samples": 20, "seed": 3, "depth": 8}


def test_lemma1_deterministic():
    a = verify_lemma1(samples=10, seed=7).to_json()
    b = verify_lemma1(samples=10, seed=7).to_json()
    assert a == b


def test_block_identities_suite():
    r = verify_block_identities(samples=20, seed=1)
    assert r.passed and r.cases_run == 40


def test_descent_pairs():
    r = verify_descent_pairs(m_max=4)
    assert r.passed and r.cases_run == 3 * 6


def test_descent_closed_form_examples():
    t = G.t_gate()
    xi = G.tensor(G.pauli_x(), G.identity(1))
    # m = 0: (U1 U2^dag (+) U2 U1^dag)(X (x) I); m = 2 squares T^dag twice to Z
    assert descent_closed_form(G.identity(1), t, 0) == G.matmul(G.direct_sum(G.dagger(t), t), xi)
    assert descent_closed_form(G.identity(1), t, 2) == G.matmul(G.direct_sum(G.pauli_z(), G.pauli_z()), xi)
    r = verify_descent_chain(G.identity(1), t, m_max=2, label="(I,T)")
    assert r.passed


def test_failure_records_reloadable_counterexample():
    r = SuiteReport("demo", {})
    h = G.hadamard()
    r.check(False, "case", "x", "y", {"u": h})
    assert not r.passed
    doc = json.loads(json.dumps(r.to_json()))
    assert Gate.from_json(doc["failures"][0]["counterexample"]["u"]) == h
    assert r.summary().startswith("[FAIL] demo")


def test_run_suite_dispatch():
    assert [s.suite for s in run_suite("descent-chain")] == ["descent-chain"]
    with pytest.raises(ValueError):
        run_suite("nope")
    with pytest.raises(ResourceGuardError):
        run_suite("classification-climbing", cap=3)


@pytest.mark.slow
def test_classification_climbing_suite():
    (r,) = run_suite("classification-climbing")
    assert r.passed
    assert r.details["histogram"] == {"Pauli": 4, "HadamardLike": 6, "OrderFour": 3, "OddOrder": 8, "Unlisted": 3}
    assert sum("matches no listed parametrization" in f for f in r.findings) == 3
