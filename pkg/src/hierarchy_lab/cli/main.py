"""``hierarchy-lab`` command line."""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .. import cyclotomic as cyc
from ..analysis import (
    DEFAULT_M_MAX,
    check_controlled_conditions,
    classify_single_qubit_clifford,
    enumerate_single_qubit_cliffords,
    is_diagonal,
    predict_controlled_level,
)
from ..gates import DEFAULT_ORDER_MAX, Gate, NotUnitaryError, controlled, order_projective
from ..hierarchy import DEFAULT_MAX_CAP, DEFAULT_MAX_QUBITS, HierarchyEngine, ResourceGuardError, default_cap
from ..verify import SUITES, run_suite
from .expr import ExprError, evaluate, parse, pretty

EXIT_OK = 0
EXIT_FAILURES = 1
EXIT_ERROR = 2


def _common_flags() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--cap", type=int, default=None, help="highest level searched (default 5, or $HIERARCHY_LAB_CAP)")
    p.add_argument("--m-max", type=int, default=DEFAULT_M_MAX, help="largest m tried for U^(2^m) (default 6)")
    p.add_argument("--order-max", type=int, default=DEFAULT_ORDER_MAX, help="projective order search bound (default 128)")
    p.add_argument("--cyc-order", type=int, default=cyc.DEFAULT_ORDER_LOG2, help="minimum ring order a, zeta = e^(i pi/2^(a-1))")
    p.add_argument("--samples", type=int, default=None, help="random cases for sampled suites")
    p.add_argument("--depth", type=int, default=6, help="gate-word depth of random unitaries")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-qubits", type=int, default=DEFAULT_MAX_QUBITS, help="qubit guard for levels >= 3")
    p.add_argument("--max-cap", type=int, default=DEFAULT_MAX_CAP, help="level guard")
    p.add_argument("--format", choices=("text", "json"), default="text")
    return p


def _gate_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("expr", nargs="?", help="gate expression, e.g. 'C(T)' or 'Z*rot(Y,2)'")
    p.add_argument("--from-json", action="store_true", help="read a gate JSON document from stdin instead")


def build_parser() -> argparse.ArgumentParser:
    common = _common_flags()
    parser = argparse.ArgumentParser(prog="hierarchy-lab", description="Exact Clifford hierarchy analysis of qubit gates.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", parents=[common], help="level, order, classification and controlled-gate conditions")
    _gate_args(p)
    p = sub.add_parser("level", parents=[common], help="decide the hierarchy level")
    _gate_args(p)
    p = sub.add_parser("controlled", parents=[common], help="predicted vs measured level of C(expr)")
    _gate_args(p)
    sub.add_parser("classify", parents=[common], help="table of the 24 single-qubit Cliffords")
    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("suite", choices=SUITES + ("all",))
    p = sub.add_parser("parse", parents=[common], help="parse and evaluate an expression")
    _gate_args(p)
    p.add_argument("--emit", choices=("expr", "json", "matrix"), default="expr")
    return parser


class _Context:
    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.cap = args.cap if args.cap is not None else default_cap()
        self.engine = HierarchyEngine(max_qubits=args.max_qubits, max_cap=max(args.max_cap, self.cap))

    def gate(self) -> tuple[Gate, str]:
        args = self.args
        if args.from_json:
            gate = Gate.from_json(json.load(sys.stdin))
            return gate.lift(max(gate.order_log2, args.cyc_order)), "<json>"
        if not args.expr:
            raise ExprError("no expression given (pass one, or --from-json with a gate on stdin)", 0)
        node = parse(args.expr)
        return evaluate(node, args.cyc_order, args.expr), pretty(node)


def cmd_level(ctx: _Context) -> tuple[dict, str, int]:
    gate, label = ctx.gate()
    lv = ctx.engine.level(gate, ctx.cap)
    return {"expr": label, "level": lv.to_json()}, f"{label}: level {lv}", EXIT_OK


def cmd_analyze(ctx: _Context) -> tuple[dict, str, int]:
    gate, label = ctx.gate()
    args = ctx.args
    lv = ctx.engine.level(gate, ctx.cap)
    order = order_projective(gate, args.order_max)
    report = check_controlled_conditions(gate, m_max=args.m_max, cap=ctx.cap, order_max=args.order_max, engine=ctx.engine)
    data = {
        "expr": label,
        "n_qubits": gate.n_qubits,
        "gate": gate.to_json(),
        "level": lv.to_json(),
        "order": order.to_json(),
        "controlled_conditions": report.to_json(),
    }
    lines = [
        f"gate:   {label} ({gate.n_qubits} qubit{'s' if gate.n_qubits != 1 else ''}, ring order a={gate.order_log2})",
        f"level:  {lv}",
        f"order:  {order.value if order.found else f'> {order.searched_up_to}'} (projective)",
    ]
    if gate.n_qubits == 1:
        cls = classify_single_qubit_clifford(gate)
        data["classification"] = cls.to_json()
        wit = ", ".join("(" + ",".join(w) + ")" for w in cls.matched_parametrizations)
        lines.append(f"class:  {cls.tag.value}" + (f"  witnesses {wit}" if wit else ""))
    pp = f", {report.pauli_power}" if report.pauli_power else ""
    lines.append(f"C(U) necessary conditions: {report.verdict.value} (m={report.m_found}{pp})")
    lines.extend(f"  note: {n}" for n in report.notes)
    return data, "\n".join(lines), EXIT_OK


def cmd_controlled(ctx: _Context) -> tuple[dict, str, int]:
    gate, label = ctx.gate()
    pred = predict_controlled_level(gate, cap=ctx.cap, m_max=ctx.args.m_max, engine=ctx.engine)
    data = {"expr": label, **pred.to_json()}
    text = (
        f"C({label}): prediction {pred.prediction if pred.prediction is not None else '-'} (conjecture), "
        f"measured {pred.measured}  [conditions: {pred.report.verdict.value}]"
    )
    return data, text, EXIT_OK


def cmd_classify(ctx: _Context) -> tuple[dict, str, int]:
    rows = []
    lines = [f"{'#':>2}  {'tag':<13}{'order':>5}  {'level':>5}  {'C(U)':>14}  witnesses"]
    for idx, g in enumerate(enumerate_single_qubit_cliffords()):
        cls = classify_single_qubit_clifford(g)
        order = order_projective(g, ctx.args.order_max)
        lv = ctx.engine.level(g, ctx.cap)
        clv = ctx.engine.level(controlled(g), ctx.cap)
        rows.append(
            {
                "index": idx,
                "gate": g.to_json(),
                "classification": cls.to_json(),
                "order": order.value,
                "level": lv.to_json(),
                "controlled_level": clv.to_json(),
                "diagonal": is_diagonal(g),
            }
        )
        wit = " ".join("(" + ",".join(w) + ")" for w in cls.matched_parametrizations)
        lines.append(f"{idx:>2}  {cls.tag.value:<13}{order.value:>5}  {str(lv):>5}  {str(clv):>14}  {wit}")
    hist: dict[str, int] = {}
    for r in rows:
        tag = r["classification"]["tag"]
        hist[tag] = hist.get(tag, 0) + 1
    lines.append("histogram: " + ", ".join(f"{k}={v}" for k, v in sorted(hist.items())))
    return {"members": rows, "histogram": hist}, "\n".join(lines), EXIT_OK


def cmd_verify(ctx: _Context) -> tuple[dict, str, int]:
    args = ctx.args
    samples = args.samples if args.samples is not None else 100
    reports = run_suite(args.suite, samples=samples, depth=args.depth, seed=args.seed, cap=ctx.cap, m_max=4)
    failed = any(not r.passed for r in reports)
    lines = []
    for r in reports:
        lines.append(r.summary())
        lines.extend(f"  finding: {f}" for f in r.findings)
        lines.extend(f"  failure: {f.case}: expected {f.expected}, got {f.got}" for f in r.failures)
        if "histogram" in r.details:
            lines.append("  histogram: " + ", ".join(f"{k}={v}" for k, v in sorted(r.details["histogram"].items())))
    data = reports[0].to_json() if len(reports) == 1 else {"suites": [r.to_json() for r in reports], "passed": not failed}
    return data, "\n".join(lines), EXIT_FAILURES if failed else EXIT_OK


def cmd_parse(ctx: _Context) -> tuple[dict, str, int]:
    gate, label = ctx.gate()
    emit = ctx.args.emit
    if emit == "json":
        doc = gate.to_json()
        return doc, json.dumps(doc), EXIT_OK
    if emit == "matrix":
        return {"expr": label, "gate": gate.to_json()}, gate.pretty(), EXIT_OK
    return {"expr": label, "n_qubits": gate.n_qubits}, label, EXIT_OK


COMMANDS = {
    "analyze": cmd_analyze,
    "level": cmd_level,
    "controlled": cmd_controlled,
    "classify": cmd_classify,
    "verify": cmd_verify,
    "parse": cmd_parse,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    as_json = args.format == "json" or getattr(args, "emit", None) == "json"
    try:
        ctx = _Context(args)
        data, text, status = COMMANDS[args.command](ctx)
    except ExprError as exc:
        return _fail(as_json, exc.to_json(), f"error: {exc.message}\n{exc.caret()}".rstrip())
    except (ResourceGuardError, NotUnitaryError, ValueError, KeyError, json.JSONDecodeError) as exc:
        err = {"type": type(exc).__name__, "message": str(exc)}
        return _fail(as_json, err, f"error: {exc}")
    if args.format == "json" and not (args.command == "parse" and args.emit == "json"):
        print(json.dumps(data, indent=2))
    else:
        print(text)
    return status


def _fail(as_json: bool, err: dict, text: str) -> int:
    if as_json:
        print(json.dumps({"error": err}))
    else:
        print(text, file=sys.stderr)
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
