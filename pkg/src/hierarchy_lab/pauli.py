"""Pauli strings in symplectic form and exact Pauli recognition.

A string with bits ``(x, z)`` on one qubit is I (0,0), X (1,0), Z (0,1) or
Y (1,1), where ``Y = i X Z``.  Over the register, the phase-free string
``sigma(x, z)`` equals ``i**|x & z| * X**x Z**z`` and a :class:`PauliString`
stands for ``i**phase_exp * sigma(x, z)``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import cyclotomic as cyc
from .gates import Gate

LETTERS = "IXYZ"
_BITS = {"I": (0, 0), "X": (1, 0), "Y": (1, 1), "Z": (0, 1)}
_LETTER = {v: k for k, v in _BITS.items()}

MAX_ENUMERATE_QUBITS = 4


def _popcount(v: int) -> int:
    return v.bit_count()


def _mask(bits: tuple[int, ...]) -> int:
    out = 0
    for b in bits:
        out = (out << 1) | b
    return out


@dataclass(frozen=True)
class PauliString:
    n: int
    x_bits: tuple[int, ...]
    z_bits: tuple[int, ...]
    phase_exp: int = 0

    def __post_init__(self) -> None:
        if len(self.x_bits) != self.n or len(self.z_bits) != self.n:
            raise ValueError("bit vectors must have length n")
        object.__setattr__(self, "x_bits", tuple(int(b) & 1 for b in self.x_bits))
        object.__setattr__(self, "z_bits", tuple(int(b) & 1 for b in self.z_bits))
        object.__setattr__(self, "phase_exp", self.phase_exp % 4)

    @classmethod
    def from_masks(cls, n: int, x: int, z: int, phase_exp: int = 0) -> PauliString:
        xs = tuple((x >> (n - 1 - q)) & 1 for q in range(n))
        zs = tuple((z >> (n - 1 - q)) & 1 for q in range(n))
        return cls(n, xs, zs, phase_exp)

    @classmethod
    def from_label(cls, label: str, phase_exp: int = 0) -> PauliString:
        bits = [_BITS[c] for c in label]
        return cls(len(label), tuple(b[0] for b in bits), tuple(b[1] for b in bits), phase_exp)

    @classmethod
    def identity(cls, n: int) -> PauliString:
        return cls(n, (0,) * n, (0,) * n)

    @classmethod
    def single(cls, n: int, qubit: int, letter: str) -> PauliString:
        label = ["I"] * n
        label[qubit] = letter
        return cls.from_label("".join(label))

    @property
    def x_mask(self) -> int:
        return _mask(self.x_bits)

    @property
    def z_mask(self) -> int:
        return _mask(self.z_bits)

    @property
    def label(self) -> str:
        return "".join(_LETTER[(x, z)] for x, z in zip(self.x_bits, self.z_bits))

    @property
    def weight(self) -> int:
        return sum(1 for x, z in zip(self.x_bits, self.z_bits) if x or z)

    def phase_free(self) -> PauliString:
        return PauliString(self.n, self.x_bits, self.z_bits, 0)

    def is_identity(self) -> bool:
        return not any(self.x_bits) and not any(self.z_bits)

    def commutes_with(self, other: PauliString) -> bool:
        return symplectic_product(self, other) == 0

    def __mul__(self, other: PauliString) -> PauliString:
        return pauli_mul(self, other)

    def __str__(self) -> str:
        return format_pauli(self)

    def to_gate(self, order_log2: int = 2) -> Gate:
        return to_gate(self, order_log2)

    def to_json(self) -> dict:
        return {"label": self.label, "phase_exp": self.phase_exp, "text": format_pauli(self)}


def symplectic_product(p: PauliString, q: PauliString) -> int:
    return (_popcount(p.x_mask & q.z_mask) + _popcount(p.z_mask & q.x_mask)) & 1


def enumerate_paulis(n: int) -> list[PauliString]:
    """All ``4**n`` phase-free strings, I-X-Y-Z lexicographic with qubit 0 slowest."""
    if not 1 <= n <= MAX_ENUMERATE_QUBITS:
        raise ValueError(f"enumerate_paulis supports 1 <= n <= {MAX_ENUMERATE_QUBITS}, got {n}")
    return list(_enumerate_cached(n))


@lru_cache(maxsize=None)
def _enumerate_cached(n: int) -> tuple[PauliString, ...]:
    return tuple(PauliString.from_label("".join(t)) for t in itertools.product(LETTERS, repeat=n))


def pauli_mul(p: PauliString, q: PauliString) -> PauliString:
    if p.n != q.n:
        raise ValueError("Pauli strings act on different qubit counts")
    x1, z1, x2, z2 = p.x_mask, p.z_mask, q.x_mask, q.z_mask
    x3, z3 = x1 ^ x2, z1 ^ z2
    # X^x1 Z^z1 X^x2 Z^z2 = (-1)^{z1.x2} X^x3 Z^z3, and each sigma carries i^{|x&z|}.
    phase = (
        p.phase_exp
        + q.phase_exp
        + _popcount(x1 & z1)
        + _popcount(x2 & z2)
        + 2 * _popcount(z1 & x2)
        - _popcount(x3 & z3)
    )
    return PauliString.from_masks(p.n, x3, z3, phase)


def to_gate(p: PauliString, order_log2: int = 2) -> Gate:
    n = p.n
    d = 1 << n
    x, z = p.x_mask, p.z_mask
    quarter = cyc.basis_size(order_log2) // 2
    arr = np.zeros((d, d, cyc.basis_size(order_log2)), dtype=np.int64)
    base_turns = p.phase_exp + _popcount(x & z)
    for c in range(d):
        turns = (base_turns + 2 * (_popcount(z & c) & 1)) % 4
        # i**turns = zeta**(turns * quarter)
        t = turns * quarter
        n_basis = 2 * quarter
        if t >= n_basis:
            arr[c ^ x, c, t - n_basis] = -1
        else:
            arr[c ^ x, c, t] = 1
    return Gate(arr, 0, order_log2)


# ---------------------------------------------------------------------------
# Recognition
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PauliMatch:
    """``u == zeta**residual * string.to_gate()`` with ``0 <= residual < 2**(a-2)``."""

    string: PauliString
    residual: int
    order_log2: int

    @property
    def total_phase(self) -> int:
        """Exponent ``t`` with ``u == zeta**t * sigma``."""
        quarter = cyc.basis_size(self.order_log2) // 2
        return self.string.phase_exp * quarter + self.residual

    def to_json(self) -> dict:
        return {
            "pauli": self.string.to_json(),
            "residual_zeta_power": self.residual,
            "cyc_order_log2": self.order_log2,
        }


@lru_cache(maxsize=None)
def _walsh_signs(n: int) -> np.ndarray:
    d = 1 << n
    idx = np.arange(d)
    parity = np.array([[_popcount(z & c) & 1 for c in idx] for z in idx], dtype=np.int64)
    return 1 - 2 * parity


def pauli_traces(u: Gate) -> np.ndarray:
    """``T[x, z] = Tr(X^x Z^z u)`` for every mask pair, shape ``(d, d, N)``.

    ``Tr(X^x Z^z u) = sum_c (-1)^{z.c} u[c, c^x]``, i.e. a Walsh-Hadamard
    transform of each "x-diagonal" of ``u``.  The trace against the string
    ``sigma(x, z)`` is this value times ``i**|x & z|``.
    """
    n = u.n_qubits
    d = u.dim
    c = np.arange(d)
    xs = np.arange(d)[:, None]
    diag = u.coeffs[c[None, :], c[None, :] ^ xs]  # (x, c, N)
    signs = _walsh_signs(n)
    if diag.dtype != object and cyc.max_abs(diag) * d >= cyc.INT64_SAFE:
        diag = diag.astype(object)
    if diag.dtype == object:
        signs = signs.astype(object)
    return np.einsum("zc,xcn->xzn", signs, diag)


def pauli_check(u: Gate) -> PauliMatch | None:
    """Return ``(string, residual)`` when ``u`` is a ring phase times a Pauli string.

    The decision follows the trace expansion over the Pauli basis: a unitary is
    a Pauli (up to phase) iff exactly one trace is nonzero.  The single
    coefficient ``Tr(sigma u) / d`` must then be a ring root of unity.
    """
    mask = u.nonzero_mask()
    # A Pauli has exactly one nonzero entry per row; skip the transform otherwise.
    if not np.all(mask.sum(axis=1) == 1):
        return None
    traces = pauli_traces(u)
    nonzero = np.argwhere(np.any(traces != 0, axis=-1))
    if len(nonzero) != 1:
        return None
    x, z = (int(v) for v in nonzero[0])
    n = u.n_qubits
    d = u.dim
    a = u.order_log2
    nb = cyc.basis_size(a)
    quarter = nb // 2
    coeff = cyc.zeta_mul_vec(traces[x, z], quarter * (_popcount(x & z) % 4))
    value = cyc.CycEntry(a, tuple(int(c) for c in coeff), u.denom_log2 + n)
    t = value.root_of_unity_power()
    if t is None:
        return None
    turns, residual = divmod(t, quarter)
    return PauliMatch(PauliString.from_masks(n, x, z, turns), residual, a)


def is_pauli(u: Gate) -> bool:
    return pauli_check(u) is not None


def pauli_expansion(u: Gate) -> dict[str, cyc.CycEntry]:
    """Nonzero coefficients ``Tr(sigma u)/d`` keyed by string label."""
    traces = pauli_traces(u)
    n, a = u.n_qubits, u.order_log2
    quarter = cyc.basis_size(a) // 2
    out = {}
    for x, z in zip(*np.nonzero(np.any(traces != 0, axis=-1))):
        x, z = int(x), int(z)
        coeff = cyc.zeta_mul_vec(traces[x, z], quarter * (_popcount(x & z) % 4))
        out[PauliString.from_masks(n, x, z).label] = cyc.CycEntry(a, tuple(int(c) for c in coeff), u.denom_log2 + n)
    return out


# ---------------------------------------------------------------------------
# Text form
# ---------------------------------------------------------------------------

_PREFIX = {0: "", 1: "i·", 2: "-", 3: "-i·"}
_TEXT_RE = re.compile(r"^\s*([+-]?)\s*(i\s*[·*]?)?\s*([IXYZ]+)\s*$")


def format_pauli(p: PauliString) -> str:
    return _PREFIX[p.phase_exp] + p.label


def parse_pauli(text: str) -> PauliString:
    """Parse ``"XZ"``, ``"-XZ"``, ``"i·YI"``, ``"-i·ZZ"`` (``*`` may replace ``·``)."""
    m = _TEXT_RE.match(text)
    if not m:
        raise ValueError(f"not a Pauli string: {text!r}")
    sign, imag, label = m.groups()
    k = (2 if sign == "-" else 0) + (1 if imag else 0)
    return PauliString.from_label(label, k)
