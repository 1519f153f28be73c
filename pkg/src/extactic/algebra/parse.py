"""Text grammar for polynomials and the canonical printer.

Grammar (implicit multiplication is rejected)::

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := factor (('*' factor) | ('/' INT))*
    factor := atom ('^' INT)?
    atom   := INT | VAR | '(' expr ')' | ('+'|'-') factor
"""

from __future__ import annotations

import re

from gmpy2 import mpq

from ..errors import ParseError
from .poly import MAX_EXPONENT, MultiPoly

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")
_MINUS_SIGNS = {"−": "-", "–": "-"}


def _tokenize(text: str):
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        m = _TOKEN.match(text, pos)
        if m is None:
            break
        if m.group(0).strip() == "":
            break
        start = m.start(1) if m.group(1) else m.start(2) if m.group(2) else m.start(3)
        if m.group(1):
            tokens.append(("int", m.group(1), start))
        elif m.group(2):
            tokens.append(("name", m.group(2), start))
        else:
            ch = _MINUS_SIGNS.get(m.group(3), m.group(3))
            if ch not in "+-*/^()":
                raise ParseError(f"unexpected character {m.group(3)!r}", start, text)
            tokens.append((ch, ch, start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, vars):
        self.text = text
        self.vars = tuple(vars)
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind=None):
        tok = self.tokens[self.i]
        if kind is not None and tok[0] != kind:
            want = "integer" if kind == "int" else repr(kind)
            got = "end of input" if tok[0] == "end" else repr(tok[1])
            raise ParseError(f"expected {want}, found {got}", tok[2], self.text)
        self.i += 1
        return tok

    def parse(self) -> MultiPoly:
        if self.peek()[0] == "end":
            raise ParseError("empty expression", 0, self.text)
        result = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            if tok[0] in ("int", "name", "("):
                raise ParseError("implicit multiplication is not allowed", tok[2], self.text)
            raise ParseError(f"unexpected {tok[1]!r}", tok[2], self.text)
        return result

    def expr(self) -> MultiPoly:
        result = self.term()
        while self.peek()[0] in "+-" and self.peek()[0] != "end":
            op = self.take()[0]
            rhs = self.term()
            result = result + rhs if op == "+" else result - rhs
        return result

    def term(self) -> MultiPoly:
        result = self.factor()
        while True:
            kind = self.peek()[0]
            if kind == "*":
                self.take()
                result = result * self.factor()
            elif kind == "/":
                tok = self.take()
                den = self.take("int")
                value = int(den[1])
                if value == 0:
                    raise ParseError("division by zero", tok[2], self.text)
                result = result.scale(mpq(1, value))
            else:
                return result

    def factor(self) -> MultiPoly:
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            tok = self.take("int")
            e = int(tok[1])
            if e > MAX_EXPONENT:
                raise ParseError(f"exponent {e} overflows (max {MAX_EXPONENT})", tok[2], self.text)
            return base ** e
        return base

    def atom(self) -> MultiPoly:
        tok = self.take()
        kind = tok[0]
        if kind == "int":
            return MultiPoly.constant(int(tok[1]), self.vars)
        if kind == "name":
            if tok[1] not in self.vars:
                raise ParseError(f"unknown variable {tok[1]!r}", tok[2], self.text)
            return MultiPoly.variable(tok[1], self.vars)
        if kind == "(":
            inner = self.expr()
            self.take(")")
            return inner
        if kind in "+-" and kind != "end":
            operand = self.factor()
            return -operand if kind == "-" else operand
        got = "end of input" if kind == "end" else repr(tok[1])
        raise ParseError(f"unexpected {got}", tok[2], self.text)


def parse_poly(text: str, vars) -> MultiPoly:
    """Parse ``text`` into a polynomial over the declared variables."""
    if not isinstance(text, str):
        raise ParseError("polynomial text must be a string")
    return _Parser(text, vars).parse()


def _coeff_text(c: mpq) -> str:
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


def to_text(p: MultiPoly) -> str:
    """Canonical form: graded-lex descending, explicit ``*``, ``^`` for powers."""
    if not p.terms:
        return "0"
    parts = []
    for exps, c in p.items():
        factors = []
        for v, e in zip(p.vars, exps):
            if e == 1:
                factors.append(v)
            elif e > 1:
                factors.append(f"{v}^{e}")
        mag = abs(c)
        if factors:
            body = "*".join(factors)
            if mag != 1:
                body = f"{_coeff_text(mag)}*{body}"
        else:
            body = _coeff_text(mag)
        if not parts:
            parts.append(f"-{body}" if c < 0 else body)
        else:
            parts.append(f"- {body}" if c < 0 else f"+ {body}")
    return " ".join(parts)
