"""Expression front end: a small recursive-descent parser for polynomials.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('-' | '+') unary | power
    power  := atom ('^' INT)?
    atom   := INT | NAME | '(' expr ')'

Multiplication must be explicit.  The right operand of ``/`` must evaluate
to a nonzero constant, so ``1/3*x`` and ``x/(2+3)`` are fine but ``1/x``
is not.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import Mapping, Sequence

from ..ratpoly import MPoly

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


class ParseError(ValueError):
    def __init__(self, message: str, column: int):
        super().__init__(f"column {column}: {message}")
        self.column = column
        self.message = message


def _tokenize(src: str) -> list:
    out = []
    pos = 0
    while pos < len(src):
        m = _TOKEN.match(src, pos)
        if not m or m.end() == pos:
            break
        num, name, op = m.groups()
        col = m.start(m.lastindex) + 1
        if num is not None:
            out.append(("int", int(num), col))
        elif name is not None:
            out.append(("name", name, col))
        else:
            if op not in "+-*/^()":
                raise ParseError(f"unexpected character {op!r}", col)
            out.append((op, op, col))
        pos = m.end()
    out.append(("end", None, len(src) + 1))
    return out


class _Parser:
    def __init__(self, src: str, variables: Sequence[str]):
        self.variables = tuple(variables)
        self.toks = _tokenize(src)
        self.i = 0

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None):
        tok = self.toks[self.i]
        if kind is not None and tok[0] != kind:
            raise ParseError(self._expected(kind, tok), tok[2])
        self.i += 1
        return tok

    @staticmethod
    def _expected(kind, tok):
        found = "end of input" if tok[0] == "end" else repr(str(tok[1]))
        return f"expected {kind!r}, found {found}"

    def parse(self) -> MPoly:
        if self.peek()[0] == "end":
            raise ParseError("empty expression", 1)
        p = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected {str(tok[1])!r}", tok[2])
        return p

    def expr(self):
        p = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            rhs = self.term()
            p = p + rhs if op == "+" else p - rhs
        return p

    def term(self):
        p = self.unary()
        while self.peek()[0] in ("*", "/"):
            op, _, col = self.take()
            rhs = self.unary()
            if op == "*":
                p = p * rhs
            else:
                if not rhs.is_constant():
                    raise ParseError("division by a non-constant expression", col)
                c = rhs.constant_term()
                if c == 0:
                    raise ParseError("division by zero", col)
                p = p / c
        return p

    def unary(self):
        kind = self.peek()[0]
        if kind == "-":
            self.take()
            return -self.unary()
        if kind == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[0] == "^":
            self.take()
            tok = self.peek()
            if tok[0] == "-":
                raise ParseError("negative exponent", tok[2])
            if tok[0] != "int":
                raise ParseError("exponent must be a non-negative integer literal", tok[2])
            self.take()
            if self.peek()[0] == "^":
                raise ParseError("chained exponents need parentheses", self.peek()[2])
            return base ** tok[1]
        return base

    def atom(self):
        tok = self.peek()
        if tok[0] == "int":
            self.take()
            return MPoly.const(tok[1], self.variables)
        if tok[0] == "name":
            self.take()
            if tok[1] not in self.variables:
                raise ParseError(f"unknown variable {tok[1]!r}", tok[2])
            return MPoly.var(tok[1], self.variables)
        if tok[0] == "(":
            self.take()
            p = self.expr()
            self.take(")")
            return p
        found = "end of input" if tok[0] == "end" else repr(str(tok[1]))
        raise ParseError(f"expected a number, variable or '(', found {found}", tok[2])


def parse_poly(src: str, variables: Sequence[str]) -> MPoly:
    """Parse ``src`` into an exact polynomial over ``variables``."""
    return _Parser(src, variables).parse()


def parse_rational(text: str) -> Fraction:
    text = str(text).strip()
    if not re.fullmatch(r"[+-]?\d+(/\d+)?", text):
        raise ValueError(f"not a rational literal: {text!r}")
    return Fraction(text)


def substitute_params(src: str, params: Mapping[str, str]) -> str:
    """Replace each parameter name (as a whole word) by its parenthesized value."""
    if not params:
        return src
    values = {k: parse_rational(v) for k, v in params.items()}
    pattern = re.compile(r"\b(" + "|".join(re.escape(k) for k in sorted(values, key=len, reverse=True)) + r")\b")
    return pattern.sub(lambda m: f"({values[m.group(1)]})", src)
