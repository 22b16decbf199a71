"""Gate expression language.

Grammar (ASCII only, whitespace-insensitive, case-sensitive names)::

    expr := term {'*' term}
    term := atom | func | '(' expr ')'
    atom := I | X | Y | Z | H | S | T | CX | CZ | SWAP
    func := C(expr) | kron(expr, expr) | dsum(expr, expr) | dag(expr)
          | pow(expr, int) | rot(pauli, int) | phase(int) | id(int)

``A*B`` is the matrix product ``A @ B``.  ``rot(P, k)`` is ``exp(i*pi*P/2**k)``
and ``phase(j)`` the 0-qubit scalar ``zeta**j``; a scalar operand of ``*``
multiplies the other side.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .. import cyclotomic as cyc
from .. import gates as G
from ..gates import Gate
from ..pauli import PauliString, to_gate

ATOMS = ("I", "X", "Y", "Z", "H", "S", "T", "CX", "CZ", "SWAP")
FUNCS = ("C", "kron", "dsum", "dag", "pow", "rot", "phase", "id")
MAX_ROT_K = cyc.MAX_ORDER_LOG2 - 1
MAX_ID_QUBITS = 6


class ExprError(ValueError):
    """Syntax or evaluation error with a source span."""

    def __init__(self, message: str, start: int, end: int | None = None, source: str = ""):
        self.message = message
        self.start = start
        self.end = start + 1 if end is None else end
        self.source = source
        super().__init__(f"{message} at position {start}")

    def to_json(self) -> dict:
        return {"type": type(self).__name__, "message": self.message, "start": self.start, "end": self.end}

    def caret(self) -> str:
        if not self.source:
            return ""
        return f"{self.source}\n{' ' * self.start}{'^' * max(1, self.end - self.start)}"


class ParseError(ExprError):
    pass


class EvalError(ExprError):
    pass


# -- AST ---------------------------------------------------------------------


@dataclass(frozen=True)
class Node:
    start: int
    end: int


@dataclass(frozen=True)
class Atom(Node):
    name: str


@dataclass(frozen=True)
class Controlled(Node):
    arg: Node


@dataclass(frozen=True)
class Kron(Node):
    left: Node
    right: Node


@dataclass(frozen=True)
class DSum(Node):
    left: Node
    right: Node


@dataclass(frozen=True)
class Dag(Node):
    arg: Node


@dataclass(frozen=True)
class Pow(Node):
    arg: Node
    exponent: int


@dataclass(frozen=True)
class Rot(Node):
    pauli: str
    k: int


@dataclass(frozen=True)
class Phase(Node):
    j: int


@dataclass(frozen=True)
class Id(Node):
    n: int


@dataclass(frozen=True)
class Product(Node):
    factors: tuple[Node, ...]


# -- tokenizer ---------------------------------------------------------------

_TOKEN_RE = re.compile(r"\s*(?:(?P<int>-?\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[*(),]))")


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    start: int

    @property
    def end(self) -> int:
        return self.start + len(self.text)


def tokenize(text: str) -> list[Token]:
    pos = 0
    out = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            start = len(text) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[start]!r}", start, source=text)
        kind = m.lastgroup
        start = m.start(kind)
        out.append(Token(kind, m.group(kind), start))
        pos = m.end()
    out.append(Token("eof", "", len(text)))
    return out


# -- parser ------------------------------------------------------------------


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self) -> Token:
        return self.tokens[self.i]

    def next(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, msg: str, tok: Token) -> ParseError:
        return ParseError(msg, tok.start, max(tok.end, tok.start + 1), self.text)

    def expect(self, text: str) -> Token:
        tok = self.next()
        if tok.text != text:
            shown = tok.text or "end of input"
            raise self.error(f"expected {text!r}, found {shown!r}", tok)
        return tok

    def parse(self) -> Node:
        node = self.expr()
        tok = self.peek()
        if tok.kind != "eof":
            raise self.error(f"unexpected {tok.text!r}", tok)
        return node

    def expr(self) -> Node:
        first = self.term()
        factors = [first]
        while self.peek().text == "*":
            self.next()
            factors.append(self.term())
        if len(factors) == 1:
            return first
        flat: list[Node] = []
        for f in factors:
            flat.extend(f.factors if isinstance(f, Product) else (f,))
        return Product(first.start, factors[-1].end, tuple(flat))

    def integer(self) -> int:
        tok = self.next()
        if tok.kind != "int":
            raise self.error(f"expected an integer, found {tok.text or 'end of input'!r}", tok)
        return int(tok.text)

    def term(self) -> Node:
        tok = self.next()
        if tok.text == "(":
            node = self.expr()
            self.expect(")")
            return node
        if tok.kind != "name":
            raise self.error(f"expected a gate, found {tok.text or 'end of input'!r}", tok)
        name = tok.text
        if name in FUNCS and self.peek().text == "(":
            return self.call(tok)
        if name in ATOMS:
            return Atom(tok.start, tok.end, name)
        if name in FUNCS:
            raise self.error(f"{name} needs arguments", tok)
        raise self.error(f"unknown atom {name!r}", tok)

    def call(self, head: Token) -> Node:
        name = head.text
        self.expect("(")
        start = head.start
        if name in ("C", "dag"):
            arg = self.expr()
            end = self.expect(")").end
            return Controlled(start, end, arg) if name == "C" else Dag(start, end, arg)
        if name in ("kron", "dsum"):
            left = self.expr()
            self.expect(",")
            right = self.expr()
            end = self.expect(")").end
            return (Kron if name == "kron" else DSum)(start, end, left, right)
        if name == "pow":
            arg = self.expr()
            self.expect(",")
            exponent = self.integer()
            end = self.expect(")").end
            return Pow(start, end, arg, exponent)
        if name == "rot":
            ptok = self.next()
            if ptok.kind != "name" or not re.fullmatch(r"[IXYZ]+", ptok.text):
                raise self.error(f"rot needs a Pauli literal such as X or XZ, found {ptok.text!r}", ptok)
            self.expect(",")
            ktok = self.peek()
            k = self.integer()
            if k < 1:
                raise self.error("rot exponent k must be >= 1", ktok)
            if k > MAX_ROT_K:
                raise self.error(f"rot exponent k must be <= {MAX_ROT_K}", ktok)
            end = self.expect(")").end
            return Rot(start, end, ptok.text, k)
        if name == "phase":
            j = self.integer()
            end = self.expect(")").end
            return Phase(start, end, j)
        if name == "id":
            ntok = self.peek()
            n = self.integer()
            if not 0 <= n <= MAX_ID_QUBITS:
                raise self.error(f"id needs 0 <= n <= {MAX_ID_QUBITS}", ntok)
            end = self.expect(")").end
            return Id(start, end, n)
        raise self.error(f"unknown function {name!r}", head)  # pragma: no cover


def parse(text: str) -> Node:
    return _Parser(text).parse()


# -- printer -----------------------------------------------------------------


def pretty(node: Node) -> str:
    if isinstance(node, Atom):
        return node.name
    if isinstance(node, Controlled):
        return f"C({pretty(node.arg)})"
    if isinstance(node, Dag):
        return f"dag({pretty(node.arg)})"
    if isinstance(node, Kron):
        return f"kron({pretty(node.left)}, {pretty(node.right)})"
    if isinstance(node, DSum):
        return f"dsum({pretty(node.left)}, {pretty(node.right)})"
    if isinstance(node, Pow):
        return f"pow({pretty(node.arg)}, {node.exponent})"
    if isinstance(node, Rot):
        return f"rot({node.pauli}, {node.k})"
    if isinstance(node, Phase):
        return f"phase({node.j})"
    if isinstance(node, Id):
        return f"id({node.n})"
    if isinstance(node, Product):
        return " * ".join(pretty(f) for f in node.factors)
    raise TypeError(f"not an expression node: {node!r}")


def strip_spans(node: Node) -> Node:
    """Copy of the tree with all spans zeroed, for structural comparison."""
    if isinstance(node, (Controlled, Dag)):
        return type(node)(0, 0, strip_spans(node.arg))
    if isinstance(node, (Kron, DSum)):
        return type(node)(0, 0, strip_spans(node.left), strip_spans(node.right))
    if isinstance(node, Pow):
        return Pow(0, 0, strip_spans(node.arg), node.exponent)
    if isinstance(node, Product):
        return Product(0, 0, tuple(strip_spans(f) for f in node.factors))
    fields = {k: v for k, v in node.__dict__.items() if k not in ("start", "end")}
    return type(node)(0, 0, **fields)


# -- evaluation --------------------------------------------------------------


def evaluate(node: Node, cyc_order: int = cyc.DEFAULT_ORDER_LOG2, source: str = "") -> Gate:
    gate = _eval(node, cyc_order, source)
    return gate.lift(max(gate.order_log2, cyc_order))


def _mul(a: Gate, b: Gate, node: Node, source: str) -> Gate:
    if a.dim == 1 or b.dim == 1:
        return G.tensor(a, b)
    if a.dim != b.dim:
        raise EvalError(f"cannot multiply {a.n_qubits}-qubit and {b.n_qubits}-qubit gates", node.start, node.end, source)
    return G.matmul(a, b)


def _eval(node: Node, a: int, source: str) -> Gate:
    if isinstance(node, Atom):
        return G.named(node.name)
    if isinstance(node, Controlled):
        return G.controlled(_eval(node.arg, a, source))
    if isinstance(node, Dag):
        return G.dagger(_eval(node.arg, a, source))
    if isinstance(node, Kron):
        return G.tensor(_eval(node.left, a, source), _eval(node.right, a, source))
    if isinstance(node, DSum):
        left, right = _eval(node.left, a, source), _eval(node.right, a, source)
        if left.dim != right.dim:
            raise EvalError(
                f"dsum blocks differ in size ({left.n_qubits} vs {right.n_qubits} qubits)", node.start, node.end, source
            )
        return G.direct_sum(left, right)
    if isinstance(node, Pow):
        return G.power(_eval(node.arg, a, source), node.exponent)
    if isinstance(node, Rot):
        return G.rotation(to_gate(PauliString.from_label(node.pauli)), node.k)
    if isinstance(node, Phase):
        return G.phase_gate(node.j, a)
    if isinstance(node, Id):
        return G.identity(node.n, 2)
    if isinstance(node, Product):
        out = _eval(node.factors[0], a, source)
        for f in node.factors[1:]:
            out = _mul(out, _eval(f, a, source), f, source)
        return out
    raise TypeError(f"not an expression node: {node!r}")


def parse_gate(text: str, cyc_order: int = cyc.DEFAULT_ORDER_LOG2) -> Gate:
    return evaluate(parse(text), cyc_order, text)
