"""Necessary-condition checks for controlled and block-diagonal gates, and the
single-qubit Clifford classification.

Every verdict here is relative to the search bounds (``m_max``, ``cap``,
``order_max``).  A failure within bounds is reported as such and never as a
proof of non-membership.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .gates import (
    DEFAULT_ORDER_MAX,
    Gate,
    OrderResult,
    block,
    canonical_key,
    controlled,
    dagger,
    hadamard,
    identity,
    is_identity_projective,
    matmul,
    named,
    order_projective,
    phase_relation,
    projective_equal,
    rotation,
    s_gate,
)
from .hierarchy import DEFAULT_CAP, HierarchyEngine, LevelResult, default_engine, is_clifford
from .pauli import PauliString, pauli_check

DEFAULT_M_MAX = 6


class Verdict(str, Enum):
    PASSES_NECESSARY = "PassesNecessary"
    FAILS_ORDER = "FailsOrder"
    FAILS_PAULI_POWER = "FailsPauliPower"
    FAILS_BLOCK_LEVEL = "FailsBlockLevel"


@dataclass
class ConditionReport:
    order: OrderResult
    verdict: Verdict
    block_levels: tuple[LevelResult, LevelResult]
    block_split: tuple[Gate, Gate] | None = None
    m_found: int | None = None
    pauli_power: PauliString | None = None
    sign_relation: int | None = None
    m_max: int = DEFAULT_M_MAX
    # Refinement from the circuit-identity argument: least m with u^(2^m) ~ I,
    # and whether u^(2^(m-1)) is then a Pauli (identity counts as a Pauli).
    identity_m: int | None = None
    half_power_is_pauli: bool | None = None
    half_power_is_nontrivial_pauli: bool | None = None
    notes: list[str] = field(default_factory=list)

    @property
    def order_is_pow2(self) -> bool:
        return self.order.is_power_of_two

    @property
    def passes(self) -> bool:
        return self.verdict is Verdict.PASSES_NECESSARY

    def to_json(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "block_split": [g.to_json() for g in self.block_split] if self.block_split else None,
            "order": self.order.to_json(),
            "order_is_pow2": self.order_is_pow2,
            "m_found": self.m_found,
            "m_max": self.m_max,
            "pauli_power": self.pauli_power.to_json() if self.pauli_power else None,
            "sign_relation": self.sign_relation,
            "block_levels": [lv.to_json() for lv in self.block_levels],
            "identity_m": self.identity_m,
            "half_power_is_pauli": self.half_power_is_pauli,
            "half_power_is_nontrivial_pauli": self.half_power_is_nontrivial_pauli,
            "notes": list(self.notes),
        }


def split_blocks(u: Gate) -> tuple[Gate, Gate] | None:
    """The two diagonal half-blocks, if both off-diagonal blocks vanish."""
    if u.n_qubits < 1:
        return None
    h = u.dim // 2
    mask = u.nonzero_mask()
    if mask[:h, h:].any() or mask[h:, :h].any():
        return None
    return block(u, 0, 0), block(u, 1, 1)


def _pauli_power_search(u: Gate, m_max: int) -> tuple[int | None, Gate | None]:
    """Least ``1 <= m <= m_max`` with ``u^(2^m)`` projectively Pauli."""
    acc = matmul(u, u)
    for m in range(1, m_max + 1):
        if pauli_check(acc) is not None:
            return m, acc
        acc = matmul(acc, acc)
    return None, None


def _identity_refinement(u: Gate, m_max: int, report: ConditionReport) -> None:
    powers = [u]
    for _ in range(m_max):
        powers.append(matmul(powers[-1], powers[-1]))
    for m in range(1, m_max + 1):
        if is_identity_projective(powers[m]):
            half = powers[m - 1]
            report.identity_m = m
            report.half_power_is_pauli = pauli_check(half) is not None
            report.half_power_is_nontrivial_pauli = report.half_power_is_pauli and not is_identity_projective(half)
            if not report.half_power_is_nontrivial_pauli:
                report.notes.append(
                    f"least m with U^(2^m) ~ I is m={m}, but U^(2^{m - 1}) is not a non-identity Pauli; "
                    "the smallest-m refinement does not hold here, the some-m condition is used for the verdict"
                )
            return
    report.notes.append(f"no U^(2^m) proportional to identity for 1 <= m <= {m_max}")


def check_controlled_conditions(
    u: Gate,
    m_max: int = DEFAULT_M_MAX,
    cap: int = DEFAULT_CAP,
    order_max: int = DEFAULT_ORDER_MAX,
    engine: HierarchyEngine | None = None,
) -> ConditionReport:
    """Necessary conditions for ``controlled(u)`` to lie in the hierarchy.

    ``u`` is the target of the control.  Requires some ``u^(2^m)`` (``m >= 1``)
    to be a Pauli and ``u`` itself to have a decided level within ``cap``.
    """
    engine = engine or default_engine()
    order = order_projective(u, order_max)
    m, pw = _pauli_power_search(u, m_max)
    u_level = engine.level(u, cap)
    levels = (LevelResult(1, cap), u_level)
    if m is None:
        verdict = Verdict.FAILS_ORDER
    elif not u_level.decided:
        verdict = Verdict.FAILS_BLOCK_LEVEL
    else:
        verdict = Verdict.PASSES_NECESSARY
    report = ConditionReport(
        order=order,
        verdict=verdict,
        block_levels=levels,
        block_split=(identity(u.n_qubits, u.order_log2), u),
        m_found=m,
        pauli_power=pauli_check(pw).string if pw is not None else None,
        m_max=m_max,
    )
    if order.found and not order.is_power_of_two:
        report.notes.append(f"projective order {order.value} is not a power of two")
    if not order.found:
        report.notes.append(f"projective order exceeds {order_max}")
    _identity_refinement(u, m_max, report)
    return report


def check_dsum_conditions(
    u1: Gate,
    u2: Gate,
    m_max: int = DEFAULT_M_MAX,
    cap: int = DEFAULT_CAP,
    order_max: int = DEFAULT_ORDER_MAX,
    engine: HierarchyEngine | None = None,
) -> ConditionReport:
    """Necessary conditions for ``u1 (+) u2``.

    ``A = (u1 u2^dag)^(2^m)`` and ``B = (u2 u1^dag)^(2^m)`` are computed
    separately; the verdict needs both to be Pauli and ``A == +-B`` exactly for
    some ``1 <= m <= m_max``, and both blocks to have decided levels.
    """
    engine = engine or default_engine()
    r = matmul(u1, dagger(u2))
    r_other = matmul(u2, dagger(u1))
    order = order_projective(r, order_max)
    levels = (engine.level(u1, cap), engine.level(u2, cap))
    report = ConditionReport(order=order, verdict=Verdict.PASSES_NECESSARY, block_levels=levels, block_split=(u1, u2), m_max=m_max)

    a, b = matmul(r, r), matmul(r_other, r_other)
    for m in range(1, m_max + 1):
        pa, pb = pauli_check(a), pauli_check(b)
        if pa is not None and pb is not None:
            if a == b:
                sign = 1
            elif a == -b:
                sign = -1
            else:
                sign = None
                t = phase_relation(a, b)
                report.notes.append(f"m={m}: A and B are Pauli but A = zeta^{t} B, not +-B")
            if sign is not None:
                report.m_found, report.pauli_power, report.sign_relation = m, pa.string, sign
                break
        a, b = matmul(a, a), matmul(b, b)

    if not (levels[0].decided and levels[1].decided):
        report.verdict = Verdict.FAILS_BLOCK_LEVEL
    elif report.m_found is None:
        report.verdict = Verdict.FAILS_PAULI_POWER
    if order.found and not order.is_power_of_two:
        report.notes.append(f"projective order of U1 U2^dag is {order.value}, not a power of two")
    return report


# ---------------------------------------------------------------------------
# Single-qubit Clifford classification
# ---------------------------------------------------------------------------


class CliffordTag(str, Enum):
    PAULI = "Pauli"
    HADAMARD_LIKE = "HadamardLike"
    ORDER_FOUR = "OrderFour"
    ODD_ORDER = "OddOrder"
    UNLISTED = "Unlisted"
    NOT_CLIFFORD = "NotClifford"


@dataclass
class CliffordClass:
    tag: CliffordTag
    matched_parametrizations: list[tuple[str, ...]] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"tag": self.tag.value, "matched_parametrizations": [list(p) for p in self.matched_parametrizations]}


def _quarter_turn(sigma: str) -> Gate:
    return rotation(named(sigma), 2)


def _sigma(label: str) -> Gate:
    return named(label)


def parametrized_sets() -> dict[CliffordTag, list[tuple[tuple[str, ...], Gate]]]:
    """The explicit families, each member paired with its (sigma1, sigma2[, sigma3]) witness."""
    axes = "XYZ"
    hadamard_like = [
        ((s1, s2), matmul(_sigma(s1), _quarter_turn(s2))) for s1, s2 in itertools.permutations(axes, 2)
    ]
    order_four = [((s,), _quarter_turn(s)) for s in axes]
    odd = [
        ((s1, s2, s3), matmul(matmul(_sigma(s1), _quarter_turn(s2)), _quarter_turn(s3)))
        for s1 in "IXYZ"
        for s2, s3 in itertools.permutations(axes, 2)
    ]
    paulis = [((s,), _sigma(s)) for s in "IXYZ"]
    return {
        CliffordTag.PAULI: paulis,
        CliffordTag.HADAMARD_LIKE: hadamard_like,
        CliffordTag.ORDER_FOUR: order_four,
        CliffordTag.ODD_ORDER: odd,
    }


_SETS: dict | None = None


def _sets() -> dict:
    global _SETS
    if _SETS is None:
        _SETS = parametrized_sets()
    return _SETS


def classify_single_qubit_clifford(u: Gate) -> CliffordClass:
    if u.n_qubits != 1:
        raise ValueError(f"classification needs a 1-qubit gate, got {u.n_qubits} qubits")
    if is_clifford(u) is None:
        return CliffordClass(CliffordTag.NOT_CLIFFORD)
    tag = None
    witnesses: list[tuple[str, ...]] = []
    for set_tag, members in _sets().items():
        hits = [w for w, g in members if projective_equal(u, g)]
        if hits and tag is None:
            tag = set_tag
        witnesses.extend(hits)
    return CliffordClass(tag or CliffordTag.UNLISTED, witnesses)


def enumerate_single_qubit_cliffords() -> list[Gate]:
    """The 24 projective single-qubit Cliffords, by breadth-first closure of {H, S}."""
    gens = [hadamard(), s_gate()]
    start = identity(1, 3)
    seen = {canonical_key(start)}
    out = [start]
    frontier = [start]
    while frontier:
        nxt = []
        for g in frontier:
            for h in gens:
                v = matmul(g, h)
                key = canonical_key(v)
                if key not in seen:
                    seen.add(key)
                    out.append(v)
                    nxt.append(v)
        frontier = nxt
    if len(out) != 24:
        raise AssertionError(f"closure of {{H, S}} gave {len(out)} projective classes, expected 24")
    return out


@dataclass
class ControlledPrediction:
    prediction: int | None
    measured: LevelResult
    base_level: LevelResult
    report: ConditionReport

    @property
    def matches(self) -> bool | None:
        if self.prediction is None or not self.measured.decided:
            return None
        return self.prediction == self.measured.level

    def to_json(self) -> dict:
        return {
            "prediction": self.prediction,
            "prediction_is_conjecture": True,
            "measured": self.measured.to_json(),
            "base_level": self.base_level.to_json(),
            "matches": self.matches,
            "conditions": self.report.to_json(),
        }


def predict_controlled_level(
    u: Gate,
    cap: int = DEFAULT_CAP,
    m_max: int = DEFAULT_M_MAX,
    engine: HierarchyEngine | None = None,
) -> ControlledPrediction:
    """Conjectured level ``level(u) + 1`` for ``controlled(u)`` next to the measured one."""
    engine = engine or default_engine()
    report = check_controlled_conditions(u, m_max=m_max, cap=cap, engine=engine)
    base = engine.level(u, cap)
    prediction = base.level + 1 if report.passes and base.decided else None
    measured = engine.level(controlled(u), cap)
    return ControlledPrediction(prediction, measured, base, report)


def is_diagonal(u: Gate) -> bool:
    mask = u.nonzero_mask()
    return not (mask & ~np.eye(u.dim, dtype=bool)).any()
