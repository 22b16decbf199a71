"""Machine-verification suites for the block identities, the Pauli-block lemma,
the squaring descent and the single-qubit classification/climbing claims.

Each suite is deterministic in its parameters, echoes them in the report, and
records a JSON counterexample (re-loadable as a gate) for every failure.
"""

from __future__ import annotations

import itertools
import random
from collections import Counter
from dataclasses import dataclass, field

from .analysis import (
    CliffordTag,
    Verdict,
    check_controlled_conditions,
    classify_single_qubit_clifford,
    enumerate_single_qubit_cliffords,
    is_diagonal,
    predict_controlled_level,
)
from .gates import (
    Gate,
    controlled,
    cz,
    dagger,
    direct_sum,
    identity,
    matmul,
    named,
    pauli_x,
    power,
    product,
    random_gate,
    tensor,
)
from .hierarchy import DEFAULT_CAP, HierarchyEngine, ResourceGuardError, f_apply
from .pauli import PauliString, enumerate_paulis, pauli_check, to_gate

SUITES = ("lemma1", "block-identities", "descent-chain", "classification-climbing")


@dataclass
class Failure:
    case: str
    expected: str
    got: str
    counterexample: dict | None = None

    def to_json(self) -> dict:
        return {"case": self.case, "expected": self.expected, "got": self.got, "counterexample": self.counterexample}


@dataclass
class SuiteReport:
    suite: str
    params: dict
    cases_run: int = 0
    failures: list[Failure] = field(default_factory=list)
    findings: list[str] = field(default_factory=list)
    details: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def check(self, ok: bool, case: str, expected: str, got: str, gates: dict[str, Gate] | None = None) -> bool:
        self.cases_run += 1
        if not ok:
            ce = {name: g.to_json() for name, g in gates.items()} if gates else None
            self.failures.append(Failure(case, expected, got, ce))
        return ok

    def to_json(self) -> dict:
        return {
            "suite": self.suite,
            "params": self.params,
            "cases_run": self.cases_run,
            "passed": self.passed,
            "failures": [f.to_json() for f in self.failures],
            "findings": list(self.findings),
            "details": self.details,
        }

    def summary(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"[{status}] {self.suite}: {self.cases_run} cases, {len(self.failures)} failures"


def _x_on_top(n_rest: int, order_log2: int = 2) -> Gate:
    """``X (x) I`` with the identity on the remaining ``n_rest`` qubits."""
    return tensor(pauli_x(), identity(n_rest, order_log2))


def _random_non_pauli(n: int, depth: int, rng: random.Random) -> Gate:
    while True:
        g = random_gate(n, depth, rng.randrange(1 << 30))
        if pauli_check(g) is None:
            return g


# ---------------------------------------------------------------------------


def verify_lemma1(n: int = 2, samples: int = 200, seed: int = 0, depth: int = 8) -> SuiteReport:
    """A block-diagonal ``U1 (+) U2`` is Pauli iff ``U1 = +-U2`` with both Pauli."""
    report = SuiteReport("lemma1", {"n": n, "samples": samples, "seed": seed, "depth": depth})
    block_n = n - 1
    blocks = [to_gate(p) for p in enumerate_paulis(block_n)]

    for p in blocks:
        for sign in (1, -1):
            q = p if sign == 1 else -p
            g = direct_sum(p, q)
            match = pauli_check(g)
            report.check(match is not None, f"forward: P (+) {'+' if sign == 1 else '-'}P", "Pauli", str(match), {"u1": p, "u2": q})

    for (i, p), (j, q) in itertools.product(enumerate(blocks), repeat=2):
        # Same block up to +-i is not enough; distinct blocks fail for either sign.
        for turns in ((1, 3) if i == j else (0, 2)):
            sign = {0: "+", 1: "+i", 2: "-", 3: "-i"}[turns]
            q2 = q.phase_shift(turns)
            g = direct_sum(p, q2)
            report.check(pauli_check(g) is None, f"reverse: Pauli blocks #{i}, {sign}#{j}", "not Pauli", "Pauli", {"u1": p, "u2": q2})

    rng = random.Random(seed)
    for s in range(samples):
        u1 = _random_non_pauli(block_n, depth, rng)
        u2 = _random_non_pauli(block_n, depth, rng) if rng.random() < 0.5 else u1
        g = direct_sum(u1, u2)
        report.check(pauli_check(g) is None, f"random non-Pauli pair #{s}", "not Pauli", "Pauli", {"u1": u1, "u2": u2})
    return report


def block_swap_sides(u1: Gate, u2: Gate) -> tuple[Gate, Gate]:
    """Both sides of ``(U1+U2)(X(x)I)(U1+U2)^dag = (U1 U2^dag + U2 U1^dag)(X(x)I)``."""
    xi = _x_on_top(u1.n_qubits)
    u = direct_sum(u1, u2)
    lhs = product([u, xi, dagger(u)])
    rhs = matmul(direct_sum(matmul(u1, dagger(u2)), matmul(u2, dagger(u1))), xi)
    return lhs, rhs


def appendix_sides(u: Gate) -> tuple[Gate, Gate]:
    """Both sides of ``C(U)(X(x)I)C(U)^dag = (I + U^2)(X (x) U^dag)``."""
    xi = _x_on_top(u.n_qubits)
    cu = controlled(u)
    lhs = product([cu, xi, dagger(cu)])
    rhs = matmul(direct_sum(identity(u.n_qubits, u.order_log2), power(u, 2)), tensor(pauli_x(), dagger(u)))
    return lhs, rhs


def verify_block_identities(samples: int = 100, depth: int = 6, seed: int = 0, n: int = 1) -> SuiteReport:
    report = SuiteReport("block-identities", {"samples": samples, "depth": depth, "seed": seed, "n": n})
    rng = random.Random(seed)
    for s in range(samples):
        u1 = random_gate(n, depth, rng.randrange(1 << 30))
        u2 = random_gate(n, depth, rng.randrange(1 << 30))
        lhs, rhs = block_swap_sides(u1, u2)
        report.check(lhs == rhs, f"block swap #{s}", "LHS == RHS", "differ", {"u1": u1, "u2": u2})
        u = random_gate(n, depth, rng.randrange(1 << 30))
        lhs, rhs = appendix_sides(u)
        report.check(lhs == rhs, f"controlled swap #{s}", "LHS == RHS", "differ", {"u": u})
    return report


def descent_closed_form(u1: Gate, u2: Gate, m: int) -> Gate:
    r = matmul(u1, dagger(u2))
    r_other = matmul(u2, dagger(u1))
    return matmul(direct_sum(power(r, 1 << m), power(r_other, 1 << m)), _x_on_top(u1.n_qubits))


def verify_descent_chain(u1: Gate, u2: Gate, m_max: int = 4, label: str = "") -> SuiteReport:
    """Iterated conjugation by ``X (x) I`` against the closed form.

    The first conjugation of ``U1 (+) U2`` gives the m = 0 form; each further
    conjugation of the previous result squares both blocks.
    """
    report = SuiteReport("descent-chain", {"pair": label, "m_max": m_max})
    xi_string = PauliString.from_label("X" + "I" * u1.n_qubits)
    g = f_apply(direct_sum(u1, u2), [xi_string])
    for m in range(0, m_max + 1):
        if m:
            g = f_apply(g, [xi_string])
        closed = descent_closed_form(u1, u2, m)
        report.check(g == closed, f"{label} m={m}", "iterated == closed form", "differ", {"u1": u1, "u2": u2})
    chain = f_apply(direct_sum(u1, u2), [xi_string] * (m_max + 1))
    report.check(chain == g, f"{label} tuple form", "F_U[XI,...,XI] == iterated", "differ", {"u1": u1, "u2": u2})
    return report


def verify_descent_pairs(pairs: list[tuple[str, str]] | None = None, m_max: int = 4) -> SuiteReport:
    pairs = pairs or [("I", "T"), ("I", "H"), ("X", "Y")]
    report = SuiteReport("descent-chain", {"pairs": [list(p) for p in pairs], "m_max": m_max})
    for a, b in pairs:
        sub = verify_descent_chain(named(a), named(b), m_max, f"({a},{b})")
        report.cases_run += sub.cases_run
        report.failures.extend(sub.failures)
    return report


def verify_classification_and_climbing(cap: int = DEFAULT_CAP, engine: HierarchyEngine | None = None) -> SuiteReport:
    if cap < 4:
        raise ResourceGuardError("classification-climbing needs cap >= 4 for the multi-control check")
    engine = engine or HierarchyEngine(max_qubits=4, max_cap=max(cap, 6))
    report = SuiteReport("classification-climbing", {"cap": cap})
    gates = enumerate_single_qubit_cliffords()
    hist: Counter = Counter()
    rows = []
    for idx, g in enumerate(gates):
        cls = classify_single_qubit_clifford(g)
        hist[cls.tag.value] += 1
        pred = predict_controlled_level(g, cap=cap, engine=engine)
        row = {
            "index": idx,
            "tag": cls.tag.value,
            "witnesses": [list(w) for w in cls.matched_parametrizations],
            "order": pred.report.order.value,
            "verdict": pred.report.verdict.value,
            "level": pred.base_level.level,
            "controlled_level": pred.measured.level,
            "prediction": pred.prediction,
            "diagonal": is_diagonal(g),
        }
        rows.append(row)
        if cls.tag is CliffordTag.UNLISTED:
            report.findings.append(f"member #{idx} (order {row['order']}) matches no listed parametrization")
        if pred.report.verdict is Verdict.PASSES_NECESSARY:
            report.check(pred.measured.decided, f"#{idx} controlled level decided", f"level <= {cap}", str(pred.measured), {"u": g})
            if pred.matches is False:
                report.findings.append(
                    f"member #{idx} ({cls.tag.value}): predicted controlled level {pred.prediction}, measured {pred.measured}"
                )
        if cls.tag is CliffordTag.ODD_ORDER:
            report.check(
                check_controlled_conditions(g, cap=cap, engine=engine).verdict is Verdict.FAILS_ORDER,
                f"#{idx} odd-order verdict", "FailsOrder", pred.report.verdict.value, {"u": g},
            )
            report.check(pred.measured.not_within_cap, f"#{idx} odd-order controlled", "not within cap", str(pred.measured), {"u": g})
    report.details["histogram"] = dict(hist)
    report.details["members"] = rows

    z = named("Z")
    climb = [controlled(z), controlled(cz()), controlled(controlled(cz()))]
    for depth, g in enumerate(climb, start=1):
        lv = engine.level(g, cap)
        report.check(lv.level == depth + 1, f"{depth}-controlled Z", str(depth + 1), str(lv), {"u": g})
    return report


def run_suite(name: str, *, samples: int = 100, depth: int = 6, seed: int = 0, cap: int = DEFAULT_CAP, m_max: int = 4) -> list[SuiteReport]:
    if name == "all":
        out = []
        for s in SUITES:
            out.extend(run_suite(s, samples=samples, depth=depth, seed=seed, cap=cap, m_max=m_max))
        return out
    if name == "lemma1":
        return [verify_lemma1(2, samples, seed, depth)]
    if name == "block-identities":
        return [verify_block_identities(samples, depth, seed)]
    if name == "descent-chain":
        return [verify_descent_pairs(m_max=m_max)]
    if name == "classification-climbing":
        return [verify_classification_and_climbing(cap)]
    raise ValueError(f"unknown suite {name!r}; choose from {', '.join(SUITES + ('all',))}")
