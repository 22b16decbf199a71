import itertools

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hierarchy_lab import gates as G
from hierarchy_lab.pauli import (
    PauliString,
    enumerate_paulis,
    format_pauli,
    is_pauli,
    parse_pauli,
    pauli_check,
    pauli_expansion,
    pauli_mul,
    symplectic_product,
    to_gate,
)
from oracles import float_expansion, float_is_pauli, float_pauli


def paulis(n):
    return st.builds(
        lambda label, k: PauliString.from_label("".join(label), k),
        st.lists(st.sampled_from("IXYZ"), min_size=n, max_size=n),
        st.integers(0, 3),
    )


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_enumeration_count_and_order(n):
    ps = enumerate_paulis(n)
    assert len(ps) == 4**n
    assert len({p.label for p in ps}) == 4**n
    assert ps[0].is_identity() and ps[1].label == "I" * (n - 1) + "X"


def test_enumeration_bounds():
    with pytest.raises(ValueError):
        enumerate_paulis(0)
    with pytest.raises(ValueError):
        enumerate_paulis(5)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_to_gate_matches_float_and_round_trips(n):
    for p in enumerate_paulis(n):
        for k in range(4):
            q = PauliString.from_label(p.label, k)
            g = to_gate(q)
            assert np.allclose(g.to_complex(), (1j**k) * float_pauli(p.label))
            m = pauli_check(g)
            assert m is not None and m.string == q and m.residual == 0


def test_pauli_mul_matches_matrix_oracle_exhaustively():
    for n in (1, 2):
        strings = [PauliString.from_label(p.label, k) for p in enumerate_paulis(n) for k in range(4)]
        for p, q in itertools.product(strings, repeat=2):
            r = pauli_mul(p, q)
            expected = (1j**p.phase_exp) * float_pauli(p.label) @ ((1j**q.phase_exp) * float_pauli(q.label))
            assert np.allclose((1j**r.phase_exp) * float_pauli(r.label), expected), (p, q, r)


def test_known_products():
    x, y, z = (PauliString.from_label(c) for c in "XYZ")
    assert x * z == PauliString.from_label("Y", 3)
    assert x * y == PauliString.from_label("Z", 1)
    assert z * z == PauliString.identity(1)
    assert not x.commutes_with(z) and x.commutes_with(x)


@settings(max_examples=200)
@given(paulis(3), paulis(3), paulis(3))
def test_group_laws(p, q, r):
    assert (p * q) * r == p * (q * r)
    pq, qp = p * q, q * p
    assert pq.phase_free() == qp.phase_free()
    assert (pq.phase_exp - qp.phase_exp) % 4 == 2 * symplectic_product(p, q)
    assert G.matmul(to_gate(p), to_gate(q)) == to_gate(pq)


@settings(max_examples=50, deadline=None)
@given(paulis(2), st.integers(0, 15))
def test_check_recovers_ring_phase(p, t):
    g = to_gate(p, 5).phase_shift(t)
    m = pauli_check(g)
    assert m is not None
    assert g == to_gate(m.string, 5).phase_shift(m.residual)
    assert 0 <= m.residual < 8  # residual below a quarter turn at a = 5
    assert m.total_phase % 32 == (8 * p.phase_exp + t) % 32


def test_check_examples():
    zx = G.tensor(G.pauli_z(), G.pauli_x())
    assert pauli_check(zx).string == PauliString.from_label("ZX")
    assert pauli_check(G.matmul(G.pauli_x(), G.pauli_z())).string == PauliString.from_label("Y", 3)
    assert pauli_check(G.direct_sum(G.pauli_x(), G.pauli_y())) is None
    assert pauli_check(G.hadamard()) is None
    assert pauli_check(G.t_gate()) is None
    assert not is_pauli(G.cnot())
    # sqrt(2)-scaled off-ring phase: (1+i)/sqrt2 * X is fine (zeta), 1/sqrt2*(X+Z) is not
    assert pauli_check(G.pauli_x().lift(3).phase_shift(1)).residual == 1


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 2), st.integers(0, 2**30))
def test_check_agrees_with_float_oracle(n, seed):
    g = G.random_gate(n, 5, seed)
    assert is_pauli(g) == float_is_pauli(g.to_complex())


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**30))
def test_expansion_agrees_with_float_oracle(seed):
    g = G.random_gate(2, 5, seed)
    exact = pauli_expansion(g)
    ref = float_expansion(g.to_complex())
    labels = ["".join(t) for t in itertools.product("IXYZ", repeat=2)]
    for label, c in zip(labels, ref):
        got = complex(exact[label]) if label in exact else 0
        assert abs(got - c) < 1e-9


def test_block_lemma_forward_and_reverse():
    blocks = [to_gate(p) for p in enumerate_paulis(1)]
    for i, p in enumerate(blocks):
        for j, q in enumerate(blocks):
            for turns in range(4):
                g = G.direct_sum(p, q.phase_shift(turns))
                expected = i == j and turns in (0, 2)
                assert is_pauli(g) == expected, (i, j, turns)
                assert float_is_pauli(g.to_complex()) == expected


@pytest.mark.parametrize(
    "text,label,k",
    [("XZ", "XZ", 0), ("-XZ", "XZ", 2), ("i·YI", "YI", 1), ("-i·ZZ", "ZZ", 3), ("i*X", "X", 1), (" - i Y ", "Y", 3)],
)
def test_parse_pauli(text, label, k):
    assert parse_pauli(text) == PauliString.from_label(label, k)


@settings(max_examples=100)
@given(paulis(3))
def test_format_parse_round_trip(p):
    assert parse_pauli(format_pauli(p)) == p


@pytest.mark.parametrize("bad", ["", "Q", "2X", "--X", "X-"])
def test_parse_pauli_rejects(bad):
    with pytest.raises(ValueError):
        parse_pauli(bad)


def test_masks_and_weight():
    p = PauliString.from_label("XIYZ")
    assert p.x_mask == 0b1010 and p.z_mask == 0b0011
    assert p.weight == 3
    assert PauliString.from_masks(4, p.x_mask, p.z_mask) == p
    assert PauliString.single(3, 1, "Y").label == "IYI"
