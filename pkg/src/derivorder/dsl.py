"""A small text language for equations.

::

    equation := sum "=" "0"
    sum      := ["+" | "-"] term (("+" | "-") term)*
    term     := factor ("*" factor)*
    factor   := int ["/" int] | func "(" "x" ["^" int] ")" | "x" ["^" int]
    func     := ("f" | "g") [int]

A term holds at most two function factors and at most one bare power of
``x``.  The first function factor is the f-side, the second the g-side.
With a single function, its letter picks the side and the bare power of
``x`` (or ``x^0`` if absent) fills the other side as a pinned identity
multiple.  Examples::

    f1(x^24)*g1(x^5) + f2(x^20)*g2(x^9) = 0
    f1(x^2) - 2*x*f1(x) = 0
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from .algebra import format_coefficient
from .equation import EquationSpec, Term
from .errors import InputError


class DSLSyntaxError(InputError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"syntax error at line {line}, column {column}: {message}")
        self.line = line
        self.column = column


_TOKEN_RE = re.compile(
    r"(?P<ws>[ \t\r\n]+)|(?P<int>\d+)|(?P<func>[fg]\d*)|(?P<x>x)|(?P<op>[-+*/^=()])"
)


@dataclass
class _Tok:
    kind: str
    text: str
    line: int
    col: int


def _tokenize(text: str) -> List[_Tok]:
    toks: List[_Tok] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise DSLSyntaxError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        if kind == "ws":
            for j, ch in enumerate(m.group(), start=pos):
                if ch == "\n":
                    line, line_start = line + 1, j + 1
        else:
            toks.append(_Tok(kind, m.group(), line, pos - line_start + 1))
        pos = m.end()
    toks.append(_Tok("eof", "", line, pos - line_start + 1))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.pos = 0

    def peek(self) -> _Tok:
        return self.toks[self.pos]

    def take(self) -> _Tok:
        tok = self.toks[self.pos]
        self.pos += 1
        return tok

    def fail(self, message: str, tok: Optional[_Tok] = None) -> DSLSyntaxError:
        tok = tok or self.peek()
        found = "end of input" if tok.kind == "eof" else repr(tok.text)
        return DSLSyntaxError(f"{message}, found {found}", tok.line, tok.col)

    def expect(self, text: str) -> _Tok:
        if self.peek().text != text or self.peek().kind == "eof":
            raise self.fail(f"expected {text!r}")
        return self.take()

    def integer(self, positive: bool = True) -> int:
        tok = self.peek()
        if tok.kind != "int":
            raise self.fail("expected an integer")
        self.take()
        value = int(tok.text)
        if positive and value == 0:
            raise DSLSyntaxError("exponent 0 is not allowed", tok.line, tok.col)
        return value

    def exponent(self) -> int:
        if self.peek().text == "^":
            self.take()
            return self.integer()
        return 1

    def equation(self) -> List[Term]:
        terms = []
        sign = 1
        if self.peek().text in "+-" and self.peek().kind == "op":
            sign = -1 if self.take().text == "-" else 1
        terms.append(self.term(len(terms) + 1, sign))
        while self.peek().kind == "op" and self.peek().text in ("+", "-"):
            sign = -1 if self.take().text == "-" else 1
            terms.append(self.term(len(terms) + 1, sign))
        self.expect("=")
        tok = self.peek()
        if tok.kind != "int" or tok.text != "0":
            raise self.fail("the right-hand side must be 0")
        self.take()
        if self.peek().kind != "eof":
            raise self.fail("unexpected trailing input")
        return terms

    def term(self, index: int, sign: int) -> Term:
        start = self.peek()
        coef = Fraction(sign)
        funcs: List[Tuple[str, int]] = []
        xpow: Optional[int] = None
        while True:
            tok = self.peek()
            if tok.kind == "int":
                self.take()
                den = 1
                if self.peek().text == "/":
                    self.take()
                    den = self.integer()
                coef *= Fraction(int(tok.text), den)
                if not coef:
                    raise DSLSyntaxError("zero coefficient", tok.line, tok.col)
            elif tok.kind == "func":
                self.take()
                self.expect("(")
                if self.peek().kind != "x":
                    raise self.fail("expected 'x'")
                self.take()
                e = self.exponent()
                self.expect(")")
                if len(funcs) == 2:
                    raise DSLSyntaxError("a term holds at most two functions", tok.line, tok.col)
                funcs.append((tok.text, e))
            elif tok.kind == "x":
                self.take()
                if xpow is not None:
                    raise DSLSyntaxError("only one bare power of x per term", tok.line, tok.col)
                xpow = self.exponent()
            else:
                raise self.fail("expected a coefficient, a function or x")
            if self.peek().text == "*":
                self.take()
                continue
            break
        if not funcs:
            raise DSLSyntaxError("term has no unknown function", start.line, start.col)
        if len(funcs) == 2:
            if xpow is not None:
                raise DSLSyntaxError("a term with two functions cannot carry a bare power of x", start.line, start.col)
            (fn, p), (gn, q) = funcs
            return Term(index, p, q, coef, f_name=fn, g_name=gn)
        (name, e), = funcs
        pinned = xpow or 0
        if name[0] == "g":
            return Term(index, pinned, e, coef, f_pinned=True, g_name=name)
        return Term(index, e, pinned, coef, g_pinned=True, f_name=name)


def parse_equation(text: str) -> List[Term]:
    """Parse DSL text into terms labelled 1, 2, ... by position."""
    return _Parser(text).equation()


def parse_spec(text: str) -> EquationSpec:
    return EquationSpec(tuple(parse_equation(text)))


def _factor(name: str, e: int) -> str:
    return f"{name}(x)" if e == 1 else f"{name}(x^{e})"


def _xpow(e: int) -> str:
    return "x" if e == 1 else f"x^{e}"


def format_term(t: Term) -> Tuple[bool, str]:
    """(negative?, body) with the magnitude of the coefficient folded in."""
    factors = []
    if not t.f_pinned:
        factors.append(_factor(t.f_name, t.p))
    if not t.g_pinned:
        factors.append(_factor(t.g_name, t.q))
    if t.f_pinned and t.p:
        factors.append(_xpow(t.p))
    if t.g_pinned and t.q:
        factors.append(_xpow(t.q))
    mag = abs(t.coef)
    if mag != 1:
        factors.insert(0, format_coefficient(mag))
    return t.coef < 0, "*".join(factors)


def print_equation(spec: EquationSpec | List[Term]) -> str:
    """Terms in label order, so ``parse_spec(print_equation(s)) == s`` for labels 1..n."""
    terms = spec.by_label() if isinstance(spec, EquationSpec) else sorted(spec, key=lambda t: t.i)
    out = ""
    for pos, t in enumerate(terms):
        neg, body = format_term(t)
        if pos == 0:
            out = ("-" if neg else "") + body
        else:
            out += (" - " if neg else " + ") + body
    return out + " = 0"
