"""
OpenQASM 2.0 subset: one ``qreg``, the qelib1 gates of the circuit
vocabulary, constant angle expressions. No classical bits, no measurement,
no user-defined gates.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .ir import Circuit, Gate, GateKind, validate

HEADER = 'OPENQASM 2.0;\ninclude "qelib1.inc";\n'

_KIND_BY_NAME = {k.value: k for k in GateKind}
_REJECTED = {"creg", "measure", "if", "gate", "opaque", "barrier", "reset", "U", "CX"}


class QasmParseError(ValueError):
    def __init__(self, line: int, message: str):
        super().__init__(f"line {line}: {message}")
        self.line = line


def format_angle(theta: float) -> str:
    return format(theta, ".17g")


def emit(c: Circuit) -> str:
    lines = [HEADER, f"qreg q[{c.num_qubits}];\n"]
    for g in c.gates:
        args = ",".join(f"q[{q}]" for q in g.qubits)
        if g.param is None:
            lines.append(f"{g.kind.value} {args};\n")
        else:
            lines.append(f"{g.kind.value}({format_angle(g.param)}) {args};\n")
    return "".join(lines)


_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>//[^\n]*)
  | (?P<real>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)
  | (?P<id>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<str>"[^"\n]*")
  | (?P<op>->|==|[\[\](),;*/+{}<>^-])
    """,
    re.VERBOSE,
)


@dataclass
class _Tok:
    kind: str
    text: str
    line: int


def _lex(text: str) -> list[_Tok]:
    toks = []
    line = 1
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise QasmParseError(line, f"unexpected character {text[pos]!r}")
        kind = m.lastgroup
        if kind == "nl":
            line += 1
        elif kind not in ("ws", "comment"):
            toks.append(_Tok(kind, m.group(), line))
        pos = m.end()
    toks.append(_Tok("eof", "", line))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _lex(text)
        self.i = 0

    @property
    def cur(self) -> _Tok:
        return self.toks[self.i]

    def fail(self, msg: str, tok: _Tok | None = None):
        raise QasmParseError((tok or self.cur).line, msg)

    def take(self, kind: str, text: str | None = None) -> _Tok:
        tok = self.cur
        if tok.kind != kind or (text is not None and tok.text != text):
            want = text if text is not None else kind
            self.fail(f"expected {want!r}, found {tok.text or 'end of input'!r}")
        self.i += 1
        return tok

    def accept(self, kind: str, text: str | None = None) -> bool:
        tok = self.cur
        if tok.kind == kind and (text is None or tok.text == text):
            self.i += 1
            return True
        return False

    def header(self) -> None:
        self.take("id", "OPENQASM")
        if self.take("real").text != "2.0":
            self.fail("only OPENQASM 2.0 is supported", self.toks[self.i - 1])
        self.take("op", ";")
        self.take("id", "include")
        if self.take("str").text != '"qelib1.inc"':
            self.fail("only qelib1.inc may be included", self.toks[self.i - 1])
        self.take("op", ";")

    def angle(self) -> float:
        # expr := ['-'] factor (('*' | '/') factor)*
        neg = self.accept("op", "-")
        value = self.factor()
        while self.cur.kind == "op" and self.cur.text in ("*", "/"):
            op = self.take("op").text
            rhs = self.factor()
            if op == "*":
                value *= rhs
            else:
                if rhs == 0:
                    self.fail("division by zero in angle")
                value /= rhs
        return -value if neg else value

    def factor(self) -> float:
        tok = self.cur
        if tok.kind == "real":
            self.i += 1
            return float(tok.text)
        if tok.kind == "id" and tok.text == "pi":
            self.i += 1
            return math.pi
        self.fail(f"bad angle expression at {tok.text or 'end of input'!r}")

    def operand(self, reg: str, size: int) -> int:
        tok = self.take("id")
        if tok.text != reg:
            self.fail(f"unknown register {tok.text!r}", tok)
        self.take("op", "[")
        idx_tok = self.take("real")
        if not idx_tok.text.isdigit():
            self.fail(f"bad qubit index {idx_tok.text!r}", idx_tok)
        self.take("op", "]")
        idx = int(idx_tok.text)
        if idx >= size:
            self.fail(f"qubit index {idx} out of range for {reg}[{size}]", idx_tok)
        return idx

    def parse(self, name: str) -> Circuit:
        self.header()
        reg, size = None, 0
        gates: list[Gate] = []
        while self.cur.kind != "eof":
            tok = self.take("id")
            word = tok.text
            if word == "qreg":
                if reg is not None:
                    self.fail("only a single qreg is supported", tok)
                reg = self.take("id").text
                self.take("op", "[")
                size_tok = self.take("real")
                if not size_tok.text.isdigit() or int(size_tok.text) < 1:
                    self.fail(f"bad register size {size_tok.text!r}", size_tok)
                size = int(size_tok.text)
                self.take("op", "]")
                self.take("op", ";")
                continue
            if word in _REJECTED:
                self.fail(f"'{word}' is outside the supported subset", tok)
            kind = _KIND_BY_NAME.get(word)
            if kind is None:
                self.fail(f"unknown gate {word!r}", tok)
            if reg is None:
                self.fail("gate before qreg declaration", tok)
            param = None
            if self.accept("op", "("):
                param = self.angle()
                self.take("op", ")")
            if kind.has_param and param is None:
                self.fail(f"{word} needs an angle", tok)
            if not kind.has_param and param is not None:
                self.fail(f"{word} takes no angle", tok)
            qubits = [self.operand(reg, size)]
            while self.accept("op", ","):
                qubits.append(self.operand(reg, size))
            self.take("op", ";")
            if len(qubits) != kind.arity:
                self.fail(f"{word} takes {kind.arity} operand(s), got {len(qubits)}", tok)
            if len(set(qubits)) != len(qubits):
                self.fail(f"{word} has repeated operands", tok)
            gates.append(Gate(kind, tuple(qubits), param))
        if reg is None:
            self.fail("missing qreg declaration")
        circ = Circuit(size, gates, name)
        problems = validate(circ)
        if problems:
            self.fail("; ".join(problems))
        return circ


def parse(text: str, name: str = "qasm") -> Circuit:
    """Parse the supported subset; raises :class:`QasmParseError` with a line number."""
    return _Parser(text).parse(name)
