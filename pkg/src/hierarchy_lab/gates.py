"""Exact unitary matrices over qubits with entries in Z[zeta, 1/2].

A :class:`Gate` keeps one coefficient array of shape ``(dim, dim, N)`` and a
single shared power-of-two denominator.  Both are kept reduced, so two gates
are equal exactly when their fields are equal (after lifting to a common
ring).  Qubit 0 is the leftmost tensor factor and the most significant bit of
a basis index; a control is always on the left.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import cyclotomic as cyc
from .cyclotomic import CycEntry

DEFAULT_ORDER_MAX = 128


class DimensionError(ValueError):
    pass


class NotUnitaryError(ValueError):
    pass


class Gate:
    """Immutable ring-valued ``2**n x 2**n`` matrix.

    The plain constructor performs no unitarity check; it is used for
    intermediate values.  Use :meth:`checked` (or :meth:`from_entries`) when
    building a gate from outside data.
    """

    __slots__ = ("coeffs", "denom_log2", "order_log2", "_key")

    def __init__(self, coeffs: np.ndarray, denom_log2: int = 0, order_log2: int = cyc.DEFAULT_ORDER_LOG2):
        cyc.check_order(order_log2)
        coeffs = np.asarray(coeffs)
        if coeffs.dtype != object:
            coeffs = coeffs.astype(np.int64, copy=False)
        if coeffs.ndim != 3 or coeffs.shape[0] != coeffs.shape[1]:
            raise DimensionError(f"coefficient array must be (d, d, N), got {coeffs.shape}")
        dim = coeffs.shape[0]
        if dim & (dim - 1) or dim == 0:
            raise DimensionError(f"dimension {dim} is not a power of two")
        if coeffs.shape[2] != cyc.basis_size(order_log2):
            raise DimensionError("basis axis does not match the ring order")
        coeffs, denom_log2 = cyc.reduce_vec(cyc.fit_dtype(coeffs), int(denom_log2))
        coeffs.flags.writeable = False
        self.coeffs = coeffs
        self.denom_log2 = denom_log2
        self.order_log2 = order_log2
        self._key = None

    # -- construction -------------------------------------------------------

    @classmethod
    def checked(cls, coeffs: np.ndarray, denom_log2: int = 0, order_log2: int = cyc.DEFAULT_ORDER_LOG2) -> Gate:
        gate = cls(coeffs, denom_log2, order_log2)
        if not gate.is_unitary():
            raise NotUnitaryError("matrix is not unitary")
        return gate

    @classmethod
    def from_entries(cls, rows: Sequence[Sequence[CycEntry]], check: bool = True) -> Gate:
        dim = len(rows)
        if any(len(r) != dim for r in rows):
            raise DimensionError("matrix must be square")
        a = max(e.order_log2 for r in rows for e in r)
        flat = [e.lift(a) for r in rows for e in r]
        k = max(e.denom_log2 for e in flat)
        arr = np.array(
            [[c << (k - e.denom_log2) for c in e.coeffs] for e in flat], dtype=object
        ).reshape(dim, dim, cyc.basis_size(a))
        gate = cls(arr, k, a)
        if check and not gate.is_unitary():
            raise NotUnitaryError("matrix is not unitary")
        return gate

    @classmethod
    def from_ints(cls, rows: Sequence[Sequence[int]], denom_log2: int = 0, order_log2: int = cyc.DEFAULT_ORDER_LOG2) -> Gate:
        arr = np.array(rows, dtype=np.int64)
        out = np.zeros(arr.shape + (cyc.basis_size(order_log2),), dtype=np.int64)
        out[..., 0] = arr
        return cls(out, denom_log2, order_log2)

    # -- shape --------------------------------------------------------------

    @property
    def dim(self) -> int:
        return self.coeffs.shape[0]

    @property
    def n_qubits(self) -> int:
        return self.dim.bit_length() - 1

    def entry(self, i: int, j: int) -> CycEntry:
        return CycEntry(self.order_log2, tuple(int(c) for c in self.coeffs[i, j]), self.denom_log2)

    def entries(self) -> list[list[CycEntry]]:
        return [[self.entry(i, j) for j in range(self.dim)] for i in range(self.dim)]

    def nonzero_mask(self) -> np.ndarray:
        return np.any(self.coeffs != 0, axis=-1)

    # -- equality -----------------------------------------------------------

    def lift(self, order_log2: int) -> Gate:
        if order_log2 == self.order_log2:
            return self
        return Gate(cyc.lift_vec(self.coeffs, self.order_log2, order_log2), self.denom_log2, order_log2)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Gate):
            return NotImplemented
        if self.dim != other.dim:
            return False
        a, b = _common_ring(self, other)
        return a.denom_log2 == b.denom_log2 and np.array_equal(a.coeffs, b.coeffs)

    def __hash__(self) -> int:
        return hash(self.key())

    def key(self) -> tuple:
        """Hashable exact serialization (not phase-invariant; see ``canonical_key``)."""
        if self._key is None:
            data = self.coeffs.tobytes() if self.coeffs.dtype != object else tuple(self.coeffs.ravel().tolist())
            self._key = (self.order_log2, self.dim, self.denom_log2, data)
        return self._key

    # -- algebra ------------------------------------------------------------

    def __matmul__(self, other: Gate) -> Gate:
        return matmul(self, other)

    def __neg__(self) -> Gate:
        return Gate(-self.coeffs, self.denom_log2, self.order_log2)

    def dagger(self) -> Gate:
        return dagger(self)

    def scale(self, phase: CycEntry) -> Gate:
        """Multiply every entry by a ring scalar."""
        a = max(self.order_log2, phase.order_log2)
        g = self.lift(a)
        p = phase.lift(a)
        scalar = cyc.entry_vec(p).reshape(1, 1, -1)
        flat = g.coeffs.reshape(1, -1, g.coeffs.shape[-1]).transpose(1, 0, 2)
        prod = cyc.matmul_vec(flat, scalar)
        return Gate(prod.reshape(g.coeffs.shape), g.denom_log2 + p.denom_log2, a)

    def phase_shift(self, power: int) -> Gate:
        """Multiply by ``zeta**power`` (a pure coefficient shift)."""
        return Gate(cyc.zeta_mul_vec(self.coeffs, power), self.denom_log2, self.order_log2)

    def is_unitary(self) -> bool:
        return matmul(self, dagger(self)) == identity(self.n_qubits, self.order_log2)

    # -- serialization ------------------------------------------------------

    def to_json(self) -> dict:
        return {
            "cyc_order_log2": self.order_log2,
            "dim": self.dim,
            "entries": [[self.entry(i, j).to_json() for j in range(self.dim)] for i in range(self.dim)],
        }

    @classmethod
    def from_json(cls, data: dict | str, check: bool = True) -> Gate:
        if isinstance(data, str):
            data = json.loads(data)
        a = int(data["cyc_order_log2"])
        dim = int(data["dim"])
        rows = data["entries"]
        if len(rows) != dim:
            raise DimensionError(f"declared dim {dim} but found {len(rows)} rows")
        entries = [[CycEntry.from_json(e, a) for e in row] for row in rows]
        return cls.from_entries(entries, check=check)

    def __repr__(self) -> str:
        return f"Gate(n_qubits={self.n_qubits}, order_log2={self.order_log2}, denom_log2={self.denom_log2})"

    def pretty(self) -> str:
        cells = [[str(e) for e in row] for row in self.entries()]
        width = max(len(c) for row in cells for c in row)
        return "\n".join("[ " + "  ".join(c.rjust(width) for c in row) + " ]" for row in cells)

    def to_complex(self) -> np.ndarray:
        """Floating-point view for debugging only."""
        return np.array([[complex(e) for e in row] for row in self.entries()])


def _common_ring(*gates: Gate) -> list[Gate]:
    a = max(g.order_log2 for g in gates)
    return [g.lift(a) for g in gates]


def _require_same_dim(a: Gate, b: Gate, what: str) -> None:
    if a.dim != b.dim:
        raise DimensionError(f"{what}: dimension mismatch ({a.dim} vs {b.dim})")


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------


def matmul(a: Gate, b: Gate) -> Gate:
    _require_same_dim(a, b, "matmul")
    a, b = _common_ring(a, b)
    return Gate(cyc.matmul_vec(a.coeffs, b.coeffs), a.denom_log2 + b.denom_log2, a.order_log2)


def product(gates: Sequence[Gate]) -> Gate:
    """Left-to-right matrix product ``g0 @ g1 @ ...``."""
    if not gates:
        raise ValueError("empty product")
    out = gates[0]
    for g in gates[1:]:
        out = matmul(out, g)
    return out


def dagger(a: Gate) -> Gate:
    return Gate(cyc.conj_vec(a.coeffs.transpose(1, 0, 2)), a.denom_log2, a.order_log2)


def power(a: Gate, t: int) -> Gate:
    if t < 0:
        return power(dagger(a), -t)
    result = identity(a.n_qubits, a.order_log2)
    base = a
    while t:
        if t & 1:
            result = matmul(result, base)
        t >>= 1
        if t:
            base = matmul(base, base)
    return result


def tensor(a: Gate, b: Gate) -> Gate:
    a, b = _common_ring(a, b)
    da, db, n = a.dim, b.dim, a.coeffs.shape[-1]
    # Kronecker product of ring elements: every entry pair multiplies.
    lhs = a.coeffs.reshape(da * da, 1, n)
    rhs = b.coeffs.reshape(1, db * db, n)
    prod = cyc.matmul_vec(lhs, rhs)  # (da*da, db*db, n)
    out = prod.reshape(da, da, db, db, n).transpose(0, 2, 1, 3, 4).reshape(da * db, da * db, n)
    return Gate(out, a.denom_log2 + b.denom_log2, a.order_log2)


def tensor_all(gates: Sequence[Gate]) -> Gate:
    out = gates[0]
    for g in gates[1:]:
        out = tensor(out, g)
    return out


def direct_sum(u1: Gate, u2: Gate) -> Gate:
    _require_same_dim(u1, u2, "direct_sum")
    u1, u2 = _common_ring(u1, u2)
    k = max(u1.denom_log2, u2.denom_log2)
    c1 = cyc.shift_up(u1.coeffs, k - u1.denom_log2)
    c2 = cyc.shift_up(u2.coeffs, k - u2.denom_log2)
    dtype = object if object in (c1.dtype, c2.dtype) else np.int64
    d, n = u1.dim, u1.coeffs.shape[-1]
    out = np.zeros((2 * d, 2 * d, n), dtype=dtype)
    out[:d, :d] = c1
    out[d:, d:] = c2
    return Gate(out, k, u1.order_log2)


def block(u: Gate, row: int, col: int) -> Gate:
    """One of the four half-size blocks, without any unitarity check."""
    h = u.dim // 2
    return Gate(u.coeffs[row * h : (row + 1) * h, col * h : (col + 1) * h], u.denom_log2, u.order_log2)


def controlled(u: Gate) -> Gate:
    return direct_sum(identity(u.n_qubits, u.order_log2), u)


def add(a: Gate, b: Gate) -> Gate:
    """Entrywise sum (not unitary in general; used by constructors)."""
    _require_same_dim(a, b, "add")
    a, b = _common_ring(a, b)
    arr, k = cyc.add_vec(a.coeffs, a.denom_log2, b.coeffs, b.denom_log2)
    return Gate(arr, k, a.order_log2)


# ---------------------------------------------------------------------------
# Projective equality and order
# ---------------------------------------------------------------------------


def _first_nonzero(g: Gate) -> int:
    flat = g.nonzero_mask().ravel()
    hits = np.flatnonzero(flat)
    if hits.size == 0:
        raise ValueError("zero matrix has no projective class")
    return int(hits[0])


def canonical_phase(g: Gate) -> int:
    """The power ``t`` for which ``zeta**t * g`` is the canonical representative.

    Among all ring phase multiples, the canonical one has the lexicographically
    least row-major entry list.  Entries before the first nonzero entry are zero
    for every candidate and phases never change an entry's denominator, so the
    comparison is settled at that first nonzero entry.
    """
    i = _first_nonzero(g)
    vec = g.coeffs.reshape(-1, g.coeffs.shape[-1])[i]
    n = vec.shape[0]
    cands = [tuple(int(c) for c in cyc.zeta_mul_vec(vec, t)) for t in range(2 * n)]
    return min(range(2 * n), key=cands.__getitem__)


def canonical_form(g: Gate) -> Gate:
    return g.phase_shift(canonical_phase(g))


def canonical_key(g: Gate) -> tuple:
    return canonical_form(g).key()


def projective_equal(a: Gate, b: Gate) -> bool:
    if a.dim != b.dim:
        return False
    a, b = _common_ring(a, b)
    return canonical_form(a) == canonical_form(b)


def phase_relation(a: Gate, b: Gate) -> int | None:
    """``t`` such that ``a == zeta**t * b`` (in the common ring), else None."""
    if a.dim != b.dim:
        return None
    a, b = _common_ring(a, b)
    ta, tb = canonical_phase(a), canonical_phase(b)
    if a.phase_shift(ta) != b.phase_shift(tb):
        return None
    return (tb - ta) % (2 * a.coeffs.shape[-1])


def is_identity_projective(g: Gate) -> bool:
    return phase_relation(g, identity(g.n_qubits, g.order_log2)) is not None


@dataclass(frozen=True)
class OrderResult:
    value: int | None
    searched_up_to: int

    @property
    def found(self) -> bool:
        return self.value is not None

    @property
    def is_power_of_two(self) -> bool:
        return self.value is not None and self.value & (self.value - 1) == 0

    def to_json(self) -> dict:
        return {"value": self.value, "searched_up_to": self.searched_up_to, "is_power_of_two": self.is_power_of_two}


def order_projective(u: Gate, order_max: int = DEFAULT_ORDER_MAX) -> OrderResult:
    if order_max < 1:
        raise ValueError("order_max must be >= 1")
    acc = u
    for t in range(1, order_max + 1):
        if is_identity_projective(acc):
            return OrderResult(t, order_max)
        acc = matmul(acc, u)
    return OrderResult(None, order_max)


# ---------------------------------------------------------------------------
# Standard gates
# ---------------------------------------------------------------------------


def identity(n_qubits: int, order_log2: int = cyc.DEFAULT_ORDER_LOG2) -> Gate:
    d = 1 << n_qubits
    arr = np.zeros((d, d, cyc.basis_size(order_log2)), dtype=np.int64)
    arr[np.arange(d), np.arange(d), 0] = 1
    return Gate(arr, 0, order_log2)


def scalar(phase: CycEntry) -> Gate:
    """A 0-qubit gate; tensoring with it multiplies by the phase."""
    return Gate(cyc.entry_vec(phase).reshape(1, 1, -1), phase.denom_log2, phase.order_log2)


def phase_gate(j: int, order_log2: int = cyc.DEFAULT_ORDER_LOG2) -> Gate:
    return scalar(CycEntry.zeta(j, order_log2))


def _single(rows: list[list[CycEntry]]) -> Gate:
    return Gate.from_entries(rows, check=False)


def pauli_x() -> Gate:
    return Gate.from_ints([[0, 1], [1, 0]], order_log2=2)


def pauli_z() -> Gate:
    return Gate.from_ints([[1, 0], [0, -1]], order_log2=2)


def pauli_y() -> Gate:
    i, zero = CycEntry.zeta(1, 2), CycEntry.zero(2)
    return _single([[zero, -i], [i, zero]])


def hadamard() -> Gate:
    s = CycEntry.inv_sqrt2(3)
    return _single([[s, s], [s, -s]])


def s_gate() -> Gate:
    one, zero = CycEntry.one(2), CycEntry.zero(2)
    return _single([[one, zero], [zero, CycEntry.zeta(1, 2)]])


def t_gate() -> Gate:
    one, zero = CycEntry.one(3), CycEntry.zero(3)
    return _single([[one, zero], [zero, CycEntry.zeta(1, 3)]])


def cnot() -> Gate:
    return controlled(pauli_x())


def cz() -> Gate:
    return controlled(pauli_z())


def swap() -> Gate:
    return Gate.from_ints([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]], order_log2=2)


def rotation(pauli: Gate, k: int) -> Gate:
    """``exp(i*pi*P / 2**k)`` for a Hermitian Pauli-type gate ``P`` (``P @ P == I``).

    With ``z = exp(i*pi/2**k)`` this is ``(z + z^-1)/2 * I + (z - z^-1)/2 * P``,
    which needs ring order ``k + 1``.
    """
    if k < 1:
        raise ValueError("rotation exponent k must be >= 1")
    a = max(k + 1, cyc.MIN_ORDER_LOG2, pauli.order_log2)
    z = CycEntry.zeta(1, k + 1).lift(a)
    zbar = z.conj()
    cos_part = (z + zbar).half()
    isin_part = (z - zbar).half()
    eye = identity(pauli.n_qubits, a)
    return add(eye.scale(cos_part), pauli.lift(a).scale(isin_part))


GATE_FACTORIES = {
    "I": lambda: identity(1, 2),
    "X": pauli_x,
    "Y": pauli_y,
    "Z": pauli_z,
    "H": hadamard,
    "S": s_gate,
    "T": t_gate,
    "CX": cnot,
    "CZ": cz,
    "SWAP": swap,
}


def named(name: str) -> Gate:
    try:
        return GATE_FACTORIES[name]()
    except KeyError:
        raise KeyError(f"unknown gate {name!r}") from None


def embed(g: Gate, qubits: Sequence[int], n_qubits: int) -> Gate:
    """Place a 1- or 2-qubit gate on the given (adjacent or not) qubits of an n-qubit register."""
    if len(qubits) == 1:
        q = qubits[0]
        parts = [identity(q, g.order_log2), g, identity(n_qubits - q - 1, g.order_log2)]
        return tensor_all(parts)
    if len(qubits) != 2:
        raise ValueError("embed supports 1- and 2-qubit gates")
    q0, q1 = qubits
    n = n_qubits
    d = 1 << n
    # Permute the register so (q0, q1) become qubits (0, 1), apply, permute back.
    order = [q0, q1] + [q for q in range(n) if q not in (q0, q1)]
    perm_rows = np.zeros(d, dtype=np.int64)
    for idx in range(d):
        bits = [(idx >> (n - 1 - q)) & 1 for q in range(n)]
        new_bits = [bits[q] for q in order]
        perm_rows[idx] = int("".join(map(str, new_bits)), 2)
    arr = np.zeros((d, d, cyc.basis_size(g.order_log2)), dtype=np.int64)
    arr[perm_rows, np.arange(d), 0] = 1
    p = Gate(arr, 0, g.order_log2)
    moved = tensor(g, identity(n - 2, g.order_log2))
    return product([dagger(p), moved, p])


def random_gate(n_qubits: int, depth: int, seed: int, order_log2: int = cyc.DEFAULT_ORDER_LOG2) -> Gate:
    """Seeded random word over {H, S, T, CNOT, SWAP}; stays inside the ring."""
    rng = random.Random(seed)
    singles = [hadamard(), s_gate(), t_gate()]
    doubles = [cnot(), swap()] if n_qubits >= 2 else []
    out = identity(n_qubits, order_log2)
    for _ in range(depth):
        pick = rng.randrange(len(singles) + len(doubles))
        if pick < len(singles):
            g = embed(singles[pick], [rng.randrange(n_qubits)], n_qubits)
        else:
            q0, q1 = rng.sample(range(n_qubits), 2)
            g = embed(doubles[pick - len(singles)], [q0, q1], n_qubits)
        out = matmul(out, g)
    return out.lift(max(order_log2, out.order_log2))
