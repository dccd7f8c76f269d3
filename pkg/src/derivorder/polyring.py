"""Sparse multivariate polynomials over Q in variables t1..tm, with gcd.

The gcd is the classical recursive one: split off the content with respect
to the main variable, run a primitive pseudo-remainder sequence on the
primitive parts, and recombine.  It is meant for desk-scale inputs.
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Dict, Iterable, Iterator, List, Tuple

Exps = Tuple[int, ...]


class Poly:
    __slots__ = ("m", "terms")

    def __init__(self, m: int, terms: Dict[Exps, Fraction] | None = None):
        self.m = m
        self.terms = {e: Fraction(c) for e, c in (terms or {}).items() if c}

    # -- constructors -----------------------------------------------------
    @classmethod
    def const(cls, m: int, c) -> "Poly":
        return cls(m, {(0,) * m: Fraction(c)})

    @classmethod
    def var(cls, m: int, i: int) -> "Poly":
        """The variable t_i (1-based)."""
        if not 1 <= i <= m:
            raise ValueError(f"variable t{i} outside t1..t{m}")
        e = [0] * m
        e[i - 1] = 1
        return cls(m, {tuple(e): Fraction(1)})

    # -- basic queries ----------------------------------------------------
    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Poly) and self.m == other.m and self.terms == other.terms

    def __hash__(self) -> int:
        return hash((self.m, frozenset(self.terms.items())))

    def __repr__(self) -> str:
        return f"Poly({self.render()})"

    def is_constant(self) -> bool:
        return all(not any(e) for e in self.terms)

    def constant_value(self) -> Fraction:
        return self.terms.get((0,) * self.m, Fraction(0))

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, v: int) -> int:
        """Degree in the 0-based variable slot v (-1 for zero)."""
        return max((e[v] for e in self.terms), default=-1)

    def variables(self) -> List[int]:
        return [v for v in range(self.m) if any(e[v] for e in self.terms)]

    def leading(self) -> Tuple[Exps, Fraction]:
        e = max(self.terms)
        return e, self.terms[e]

    # -- arithmetic -------------------------------------------------------
    def _check(self, other: "Poly") -> None:
        if self.m != other.m:
            raise ValueError("polynomials live in different rings")

    def __add__(self, other: "Poly") -> "Poly":
        self._check(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, 0) + c
        return Poly(self.m, out)

    def __neg__(self) -> "Poly":
        return Poly(self.m, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other) -> "Poly":
        if isinstance(other, (int, Fraction)):
            return Poly(self.m, {e: c * other for e, c in self.terms.items()})
        self._check(other)
        # integer arithmetic on scaled copies; Fraction is far slower per op
        da, ia = _scaled(self)
        db, ib = _scaled(other)
        acc: Dict[Exps, int] = {}
        for ea, ca in ia:
            for eb, cb in ib:
                e = tuple(x + y for x, y in zip(ea, eb))
                acc[e] = acc.get(e, 0) + ca * cb
        den = da * db
        return Poly(self.m, {e: Fraction(c, den) for e, c in acc.items() if c})

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        result = Poly.const(self.m, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def derivative(self, i: int) -> "Poly":
        """Partial derivative with respect to t_i (1-based)."""
        v = i - 1
        out: Dict[Exps, Fraction] = {}
        for e, c in self.terms.items():
            if e[v]:
                ne = e[:v] + (e[v] - 1,) + e[v + 1:]
                out[ne] = out.get(ne, 0) + c * e[v]
        return Poly(self.m, out)

    def monic(self) -> "Poly":
        if not self.terms:
            return self
        _, lc = self.leading()
        return self * (1 / lc)

    # -- text ---------------------------------------------------------------
    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e in sorted(self.terms, reverse=True):
            c = self.terms[e]
            mono = "*".join(
                (f"t{v + 1}" if k == 1 else f"t{v + 1}^{k}") for v, k in enumerate(e) if k
            )
            mag = abs(c)
            cs = str(mag.numerator) if mag.denominator == 1 else f"{mag.numerator}/{mag.denominator}"
            body = cs if not mono else (mono if mag == 1 else f"{cs}*{mono}")
            parts.append(("-" if c < 0 else "+", body))
        sign, body = parts[0]
        out = ("-" if sign == "-" else "") + body
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out


def _scaled(a: Poly) -> Tuple[int, List[Tuple[Exps, int]]]:
    """(D, [(e, D*c)]) with D the lcm of the coefficient denominators."""
    den = math.lcm(*(c.denominator for c in a.terms.values())) if a.terms else 1
    return den, [(e, c.numerator * (den // c.denominator)) for e, c in a.terms.items()]


# -- division and gcd --------------------------------------------------------


def divide_exact(a: Poly, b: Poly) -> Poly:
    """a / b, raising ArithmeticError when b does not divide a."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    lb_e, lb_c = b.leading()
    quotient: Dict[Exps, Fraction] = {}
    rem = a
    while rem:
        lr_e, lr_c = rem.leading()
        if any(x < y for x, y in zip(lr_e, lb_e)):
            raise ArithmeticError("inexact polynomial division")
        shift = tuple(x - y for x, y in zip(lr_e, lb_e))
        factor = lr_c / lb_c
        quotient[shift] = quotient.get(shift, 0) + factor
        rem = rem - Poly(a.m, {shift: factor}) * b
    return Poly(a.m, quotient)


def _coefficients(a: Poly, v: int) -> Dict[int, Poly]:
    """Coefficients of a as a polynomial in slot v (each with v-exponent zeroed)."""
    out: Dict[int, Dict[Exps, Fraction]] = {}
    for e, c in a.terms.items():
        out.setdefault(e[v], {})[e[:v] + (0,) + e[v + 1:]] = c
    return {k: Poly(a.m, t) for k, t in out.items()}


def _lc(a: Poly, v: int) -> Poly:
    coeffs = _coefficients(a, v)
    return coeffs[max(coeffs)]


def _content(a: Poly, v: int) -> Poly:
    g = Poly(a.m)
    for c in _coefficients(a, v).values():
        g = gcd(g, c)
        if g.is_constant():
            return Poly.const(a.m, 1)
    return g


def _integer_primitive(a: Poly) -> Poly:
    """Scale to coprime integer coefficients; keeps pseudo-remainders small."""
    if not a:
        return a
    den = math.lcm(*(c.denominator for c in a.terms.values()))
    nums = [int(c * den) for c in a.terms.values()]
    g = math.gcd(*nums)
    return a * Fraction(den, g)


def _primitive(a: Poly, v: int) -> Poly:
    return _integer_primitive(divide_exact(a, _content(a, v)))


def _prem(a: Poly, b: Poly, v: int) -> Poly:
    db = b.degree_in(v)
    lcb = _lc(b, v)
    r = a
    while r and r.degree_in(v) >= db:
        shift = [0] * a.m
        shift[v] = r.degree_in(v) - db
        r = _integer_primitive(lcb * r - _lc(r, v) * Poly(a.m, {tuple(shift): Fraction(1)}) * b)
    return r


def gcd(a: Poly, b: Poly) -> Poly:
    """Monic (in lex order) greatest common divisor; gcd(0, 0) = 0."""
    if not a:
        return b.monic()
    if not b:
        return a.monic()
    slots = sorted(set(a.variables()) | set(b.variables()))
    if not slots or a.is_constant() or b.is_constant():
        return Poly.const(a.m, 1)
    v = slots[-1]
    if a.degree_in(v) == 0:
        return gcd(a, _content(b, v))
    if b.degree_in(v) == 0:
        return gcd(_content(a, v), b)
    ca, cb = _content(a, v), _content(b, v)
    pa = _integer_primitive(divide_exact(a, ca))
    pb = _integer_primitive(divide_exact(b, cb))
    if pa.degree_in(v) < pb.degree_in(v):
        pa, pb = pb, pa
    while True:
        r = _prem(pa, pb, v)
        if not r:
            g = pb
            break
        if r.degree_in(v) == 0:
            g = Poly.const(a.m, 1)
            break
        pa, pb = pb, _primitive(r, v)
    return (gcd(ca, cb) * g).monic()


def monomials_up_to(m: int, degree: int) -> Iterator[Exps]:
    """All exponent tuples in m variables of total degree <= degree."""

    def rec(slot: int, left: int) -> Iterator[Exps]:
        if slot == m:
            yield ()
            return
        for k in range(left + 1):
            for rest in rec(slot + 1, left - k):
                yield (k,) + rest

    yield from rec(0, degree)


def poly_from_items(m: int, items: Iterable[Tuple[Exps, Fraction]]) -> Poly:
    return Poly(m, dict(items))
