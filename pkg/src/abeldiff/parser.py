"""Curve-equation parser and canonical pretty-printer.

Grammar: integer and rational literals (p/q), variables x and y, operators
+ - * ^ and parentheses.  Implicit multiplication is rejected on purpose:
"2*x*y" parses, "2xy" does not.  No decimal points — exactness discipline.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import PolySyntaxError, UnknownVariable
from .polys import BPoly

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z]+)|([()+\-*/^]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    out = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise PolySyntaxError(f"unexpected character {text[pos]!r}", pos)
        if m.group(1):
            out.append(("num", m.group(1), m.start(1)))
        elif m.group(2):
            out.append(("name", m.group(2), m.start(2)))
        elif m.group(3):
            out.append(("op", m.group(3), m.start(3)))
        pos = m.end()
    out.append(("end", "", len(text)))
    return out


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expr(self) -> BPoly:
        acc = self.term()
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                rhs = self.term()
                acc = acc + rhs if val == "+" else acc - rhs
            else:
                return acc

    def term(self) -> BPoly:
        acc = self.unary()
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val == "*":
                self.take()
                acc = acc * self.unary()
            elif kind in ("num", "name") or (kind == "op" and val == "("):
                raise PolySyntaxError(
                    "implicit multiplication is not allowed; write '*' explicitly", pos)
            else:
                return acc

    def unary(self) -> BPoly:
        sign = 1
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                if val == "-":
                    sign = -sign
            else:
                break
        p = self.power()
        return p if sign == 1 else -p

    def power(self) -> BPoly:
        base = self.atom()
        kind, val, pos = self.peek()
        if kind == "op" and val == "^":
            self.take()
            kind, val, pos = self.peek()
            if kind != "num":
                raise PolySyntaxError("exponent must be a nonnegative integer", pos)
            self.take()
            return base ** int(val)
        return base

    def atom(self) -> BPoly:
        kind, val, pos = self.take()
        if kind == "num":
            nkind, nval, npos = self.peek()
            if nkind == "op" and nval == "/":
                self.take()
                dkind, dval, dpos = self.peek()
                if dkind != "num":
                    raise PolySyntaxError("denominator must be an integer", dpos)
                self.take()
                if int(dval) == 0:
                    raise PolySyntaxError("zero denominator", dpos)
                return BPoly.const(Fraction(int(val), int(dval)))
            return BPoly.const(Fraction(int(val)))
        if kind == "name":
            if val == "x":
                return BPoly.x()
            if val == "y":
                return BPoly.y()
            raise UnknownVariable(val, pos)
        if kind == "op" and val == "(":
            inner = self.expr()
            kind, val, pos = self.take()
            if not (kind == "op" and val == ")"):
                raise PolySyntaxError("expected ')'", pos)
            return inner
        raise PolySyntaxError(f"expected a number, variable or '(', got {val!r}", pos)


def parse_poly(text: str) -> BPoly:
    """Exact bivariate polynomial from text; round-trips with format_bpoly
    up to term order."""
    p = _Parser(text)
    result = p.expr()
    kind, val, pos = p.peek()
    if kind != "end":
        raise PolySyntaxError(f"trailing input {val!r}", pos)
    return result


def _fmt_coeff(c: Fraction) -> str:
    return str(c)


def _fmt_mono(i: int, j: int) -> str:
    parts = []
    if i == 1:
        parts.append("x")
    elif i > 1:
        parts.append(f"x^{i}")
    if j == 1:
        parts.append("y")
    elif j > 1:
        parts.append(f"y^{j}")
    return "*".join(parts)


def format_bpoly(p: BPoly) -> str:
    """Canonical form: terms by descending total degree, then descending
    x-exponent; parses back to the same polynomial."""
    if p.is_zero:
        return "0"
    keys = sorted(p.terms, key=lambda ij: (-(ij[0] + ij[1]), -ij[0]))
    chunks = []
    for idx, (i, j) in enumerate(keys):
        c = p.terms[(i, j)]
        neg = c < 0
        mag = -c if neg else c
        mono = _fmt_mono(i, j)
        if not mono:
            body = _fmt_coeff(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{_fmt_coeff(mag)}*{mono}"
        if idx == 0:
            chunks.append(f"-{body}" if neg else body)
        else:
            chunks.append(f"- {body}" if neg else f"+ {body}")
    return " ".join(chunks)
