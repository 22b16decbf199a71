"""Level decision for the Clifford hierarchy by direct recursion on conjugates.

Level 1 is the Pauli group (up to ring phases) and level 2 the Clifford
group, decided on the ``2n`` generators because level 1 is a group.  From
level 3 on the levels are not closed under multiplication, so ``u`` is at
level ``k`` only if ``u P u^dagger`` is at level ``k - 1`` for every one of
the ``4**n`` phase-free strings ``P``.
"""

from __future__ import annotations

import os
import threading
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from . import cyclotomic as cyc
from .gates import Gate, canonical_key, dagger, matmul
from .pauli import PauliString, _popcount, enumerate_paulis, pauli_check, to_gate

DEFAULT_CAP = 5
DEFAULT_MAX_QUBITS = 3
DEFAULT_MAX_CAP = 6
DEFAULT_CACHE_LIMIT = 1 << 20


class ResourceGuardError(RuntimeError):
    """The requested decision exceeds the configured qubit/level guard."""


@dataclass(frozen=True)
class LevelResult:
    level: int | None
    cap: int

    @property
    def decided(self) -> bool:
        return self.level is not None

    @property
    def not_within_cap(self) -> bool:
        return self.level is None

    def to_json(self) -> dict:
        if self.level is None:
            return {"level": None, "not_within_cap": self.cap}
        return {"level": self.level, "cap": self.cap}

    def __str__(self) -> str:
        return str(self.level) if self.level is not None else f"not within cap {self.cap}"


@dataclass(frozen=True)
class CliffordTableau:
    """Images of ``X_i`` and ``Z_i`` under conjugation, with their i**k phases."""

    x_images: tuple[PauliString, ...]
    z_images: tuple[PauliString, ...]

    @property
    def n(self) -> int:
        return len(self.x_images)

    def preserves_symplectic_form(self) -> bool:
        gens = self.x_images + self.z_images
        n = self.n
        for i, p in enumerate(gens):
            for j, q in enumerate(gens):
                # X_i, Z_j anticommute iff i == j; everything else commutes.
                expected = 1 if (i < n) != (j < n) and i % n == j % n else 0
                if (_popcount(p.x_mask & q.z_mask) + _popcount(p.z_mask & q.x_mask)) & 1 != expected:
                    return False
        return True

    def to_json(self) -> dict:
        return {
            "x_images": [str(p) for p in self.x_images],
            "z_images": [str(p) for p in self.z_images],
        }


def conjugate(u: Gate, p: PauliString) -> Gate:
    """Exact ``u P u^dagger``."""
    if p.n != u.n_qubits:
        raise ValueError(f"Pauli string on {p.n} qubits cannot conjugate a {u.n_qubits}-qubit gate")
    return _conjugate(u, p, dagger(u))


def _conjugate(u: Gate, p: PauliString, u_dag: Gate) -> Gate:
    return matmul(right_multiply_pauli(u, p), u_dag)


@lru_cache(maxsize=None)
def _z_parity(d: int, z: int) -> np.ndarray:
    return np.array([_popcount(z & c) & 1 for c in range(d)], dtype=bool)


def right_multiply_pauli(u: Gate, p: PauliString) -> Gate:
    """``u @ P`` as a column permutation with signs: ``(uP)[r, c] = phase(c) * u[r, c ^ x]``."""
    d = u.dim
    x, z = p.x_mask, p.z_mask
    out = u.coeffs[:, np.arange(d) ^ x]
    parity = _z_parity(d, z)
    if parity.any():
        out[:, parity] = -out[:, parity]
    quarter = cyc.basis_size(u.order_log2) // 2
    turns = (p.phase_exp + _popcount(x & z)) % 4
    if turns:
        out = cyc.zeta_mul_vec(out, turns * quarter)
    return Gate(out, u.denom_log2, u.order_log2)


def generator_strings(n: int) -> list[PauliString]:
    return [PauliString.single(n, q, "X") for q in range(n)] + [PauliString.single(n, q, "Z") for q in range(n)]


def is_clifford(u: Gate) -> CliffordTableau | None:
    n = u.n_qubits
    u_dag = dagger(u)
    images = []
    for g in generator_strings(n):
        match = pauli_check(_conjugate(u, g, u_dag))
        if match is None:
            return None
        images.append(match.string)
    return CliffordTableau(tuple(images[:n]), tuple(images[n:]))


class HierarchyEngine:
    """Memoized level decisions with resource guards.

    The memo maps the projective canonical key of a gate to the interval of
    levels already settled: the largest level known to fail and the smallest
    known to hold.  Nesting ``CH_k <= CH_{k+1}`` lets one entry answer every
    other level outside that interval.
    """

    def __init__(
        self,
        max_qubits: int = DEFAULT_MAX_QUBITS,
        max_cap: int = DEFAULT_MAX_CAP,
        cache_limit: int = DEFAULT_CACHE_LIMIT,
    ) -> None:
        self.max_qubits = max_qubits
        self.max_cap = max_cap
        self.cache_limit = cache_limit
        self._memo: dict[tuple, tuple[int, int | None]] = {}
        self._lock = threading.Lock()
        self.stats = {"hits": 0, "misses": 0}

    # -- memo ---------------------------------------------------------------

    def _lookup(self, key: tuple, k: int) -> bool | None:
        entry = self._memo.get(key)
        if entry is None:
            return None
        max_false, min_true = entry
        if min_true is not None and k >= min_true:
            return True
        if k <= max_false:
            return False
        return None

    def _store(self, key: tuple, k: int, value: bool) -> None:
        with self._lock:
            max_false, min_true = self._memo.get(key, (0, None))
            if value:
                min_true = k if min_true is None else min(min_true, k)
            else:
                max_false = max(max_false, k)
            if len(self._memo) >= self.cache_limit and key not in self._memo:
                self._memo.clear()
            self._memo[key] = (max_false, min_true)

    def clear(self) -> None:
        with self._lock:
            self._memo.clear()

    # -- decisions ----------------------------------------------------------

    def _guard(self, u: Gate, k: int) -> None:
        if k > self.max_cap:
            raise ResourceGuardError(f"level {k} exceeds the guard max_cap={self.max_cap}")
        if k >= 3 and u.n_qubits > self.max_qubits:
            raise ResourceGuardError(
                f"{u.n_qubits}-qubit gate exceeds the guard max_qubits={self.max_qubits} for level {k}"
            )

    def in_level(self, u: Gate, k: int) -> bool:
        if k < 1:
            raise ValueError("levels start at 1")
        self._guard(u, k)
        return self._in_level(u, k, canonical_key(u))

    def _in_level(self, u: Gate, k: int, key: tuple) -> bool:
        cached = self._lookup(key, k)
        if cached is not None:
            self.stats["hits"] += 1
            return cached
        self.stats["misses"] += 1
        # A Pauli sits at every level; checking it first prunes most branches.
        if pauli_check(u) is not None:
            self._store(key, 1, True)
            return True
        if k == 1:
            self._store(key, 1, False)
            return False
        if self._lookup(key, 2) is None:
            self._store(key, 2, is_clifford(u) is not None)
        if k == 2 or self._lookup(key, k) is not None:
            return bool(self._lookup(key, k))
        result = True
        u_dag = dagger(u)
        for p in enumerate_paulis(u.n_qubits):
            if p.is_identity():
                continue
            v = _conjugate(u, p, u_dag)
            if not self._in_level(v, k - 1, canonical_key(v)):
                result = False
                break
        self._store(key, k, result)
        return result

    def level(self, u: Gate, cap: int = DEFAULT_CAP) -> LevelResult:
        if cap < 1:
            raise ValueError("cap must be >= 1")
        for k in range(1, cap + 1):
            if self.in_level(u, k):
                return LevelResult(k, cap)
        return LevelResult(None, cap)


def f_apply(u: Gate, ps: Sequence[PauliString]) -> Gate:
    """Iterated conjugation ``F_u[P1, ..., Pk] = F_{F_u[P1..P(k-1)]}[Pk]``, ``F_u[P] = u P u^dagger``."""
    if not ps:
        raise ValueError("f_apply needs at least one Pauli string")
    out = u
    for p in ps:
        out = conjugate(out, p)
    return out


def pauli_gate(p: PauliString, order_log2: int = 2) -> Gate:
    return to_gate(p, order_log2)


def default_cap() -> int:
    raw = os.environ.get("HIERARCHY_LAB_CAP")
    return int(raw) if raw else DEFAULT_CAP


_default_engine = HierarchyEngine()


def default_engine() -> HierarchyEngine:
    return _default_engine


def in_level(u: Gate, k: int, engine: HierarchyEngine | None = None) -> bool:
    return (engine or _default_engine).in_level(u, k)


def level(u: Gate, cap: int = DEFAULT_CAP, engine: HierarchyEngine | None = None) -> LevelResult:
    return (engine or _default_engine).level(u, cap)
