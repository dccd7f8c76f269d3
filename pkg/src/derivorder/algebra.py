"""Exact scalars, multi-indices and graded polynomials in the state variables.

The state variables are ``X`` (standing for ``x``) and ``D1, D2, ...``
(standing for ``d(x), d^2(x), ...``).  They are algebraically independent,
so a polynomial identity in them holds iff every coefficient vanishes.

Coefficients are :class:`fractions.Fraction` in the concrete case and
:class:`LinForm` (linear forms in unknowns) inside constraint systems.
"""
from __future__ import annotations

import math
import re
from fractions import Fraction
from typing import Any, Callable, Dict, Hashable, Iterable, Iterator, Mapping, Tuple

from .errors import InputError

Rational = Fraction


def as_rational(value: Any) -> Fraction:
    """Coerce an int, Fraction or ``"num/den"`` string to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise InputError(f"not a rational number: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"not a rational number: {value!r}") from exc
    raise InputError(f"not a rational number: {value!r}")


def format_rational(value: Fraction) -> str:
    """``num/den`` form used in JSON payloads (always with a denominator)."""
    return f"{value.numerator}/{value.denominator}"


def format_coefficient(value: Fraction) -> str:
    """Compact form used in text rendering: integers print bare."""
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def multinomial(k: int, parts: Iterable[int]) -> Fraction:
    """k! / (parts[0]! * parts[1]! * ...)."""
    parts = list(parts)
    if k < 0 or any(j < 0 for j in parts):
        raise InputError("multinomial arguments must be nonnegative")
    if sum(parts) != k:
        raise InputError(f"parts {parts} do not sum to {k}")
    denom = 1
    for j in parts:
        denom *= math.factorial(j)
    return Fraction(math.factorial(k) // denom)


def falling_factorial(p: int, r: int) -> int:
    """p (p-1) ... (p-r+1); equals the multinomial p choose (1, ..., 1) with r ones."""
    out = 1
    for j in range(r):
        out *= p - j
    return out


class MultiIndex:
    """A finitely supported sequence of nonnegative integers.

    Trailing zeros are trimmed, so ``MultiIndex((1, 0)) == MultiIndex((1,))``.
    """

    __slots__ = ("entries",)

    def __init__(self, entries: Iterable[int] = ()):
        entries = tuple(int(a) for a in entries)
        if any(a < 0 for a in entries):
            raise InputError(f"multi-index entries must be nonnegative: {entries}")
        while entries and entries[-1] == 0:
            entries = entries[:-1]
        self.entries = entries

    def __repr__(self) -> str:
        return f"MultiIndex({self.entries})"

    def __eq__(self, other: object) -> bool:
        return isinstance(other, MultiIndex) and self.entries == other.entries

    def __hash__(self) -> int:
        return hash(("MultiIndex", self.entries))

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, k: int) -> int:
        return self.entries[k] if k < len(self.entries) else 0

    def __iter__(self) -> Iterator[int]:
        return iter(self.entries)

    @property
    def order(self) -> int:
        return sum(self.entries)

    def factorial(self) -> int:
        return math.prod(math.factorial(a) for a in self.entries)

    def __le__(self, other: "MultiIndex") -> bool:
        width = max(len(self), len(other))
        return all(self[k] <= other[k] for k in range(width))

    def __lt__(self, other: "MultiIndex") -> bool:
        return self <= other and self != other

    def __add__(self, other: "MultiIndex") -> "MultiIndex":
        width = max(len(self), len(other))
        return MultiIndex(self[k] + other[k] for k in range(width))

    def __sub__(self, other: "MultiIndex") -> "MultiIndex":
        if not other <= self:
            raise InputError(f"{other} is not below {self}")
        return MultiIndex(self[k] - other[k] for k in range(len(self)))

    def binom(self, beta: "MultiIndex") -> int:
        width = max(len(self), len(beta))
        return math.prod(math.comb(self[k], beta[k]) for k in range(width))

    def lower_set(self) -> Iterator["MultiIndex"]:
        """All beta <= self in lexicographic order."""

        def rec(pos: int, prefix: Tuple[int, ...]) -> Iterator[Tuple[int, ...]]:
            if pos == len(self.entries):
                yield prefix
                return
            for b in range(self.entries[pos] + 1):
                yield from rec(pos + 1, prefix + (b,))

        for entries in rec(0, ()):
            yield MultiIndex(entries)


class StateMonomial:
    """``X^e * D1^j1 * D2^j2 * ...`` stored densely as ``(e, j1, j2, ...)``."""

    __slots__ = ("exps", "_hash")

    def __init__(self, exps: Tuple[int, ...] = ()):
        exps = tuple(exps)
        while exps and exps[-1] == 0:
            exps = exps[:-1]
        self.exps = exps
        self._hash = hash(exps)

    @classmethod
    def from_parts(cls, x_exp: int = 0, d_exps: Mapping[int, int] | None = None) -> "StateMonomial":
        d_exps = dict(d_exps or {})
        if x_exp < 0 or any(t < 1 or j < 0 for t, j in d_exps.items()):
            raise InputError("state monomial exponents must be nonnegative, orders >= 1")
        top = max(d_exps, default=0)
        return cls((x_exp,) + tuple(d_exps.get(t, 0) for t in range(1, top + 1)))

    @property
    def x_exp(self) -> int:
        return self.exps[0] if self.exps else 0

    @property
    def d_exps(self) -> Dict[int, int]:
        return {t: j for t, j in enumerate(self.exps[1:], start=1) if j}

    @property
    def weight(self) -> int:
        return sum(t * j for t, j in enumerate(self.exps))

    @property
    def degree(self) -> int:
        return sum(self.exps)

    def __mul__(self, other: "StateMonomial") -> "StateMonomial":
        a, b = self.exps, other.exps
        if len(a) < len(b):
            a, b = b, a
        return StateMonomial(tuple(x + y for x, y in zip(a, b)) + a[len(b):])

    def __eq__(self, other: object) -> bool:
        return isinstance(other, StateMonomial) and self.exps == other.exps

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"StateMonomial({self.render()})"

    def sort_key(self) -> tuple:
        # weight desc, degree desc, then lexicographic on (X, D1, D2, ...) desc
        return (-self.weight, -self.degree, tuple(-e for e in self.exps))

    def render(self) -> str:
        factors = []
        for pos, e in enumerate(self.exps):
            if not e:
                continue
            name = "X" if pos == 0 else f"D{pos}"
            factors.append(name if e == 1 else f"{name}^{e}")
        return "*".join(factors) if factors else "1"


ONE = StateMonomial()


class LinForm:
    """An exact linear form ``sum c_u * u + constant`` over hashable unknowns."""

    __slots__ = ("terms", "constant")

    def __init__(self, terms: Mapping[Hashable, Fraction] | None = None, constant: Any = 0):
        self.terms = {u: Fraction(c) for u, c in (terms or {}).items() if c}
        self.constant = Fraction(constant)

    @classmethod
    def unknown(cls, u: Hashable, coefficient: Any = 1) -> "LinForm":
        return cls({u: Fraction(coefficient)})

    def __bool__(self) -> bool:
        return bool(self.terms) or bool(self.constant)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, LinForm):
            return self.terms == other.terms and self.constant == other.constant
        if isinstance(other, (int, Fraction)):
            return not self.terms and self.constant == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((frozenset(self.terms.items()), self.constant))

    def __repr__(self) -> str:
        return f"LinForm({self.terms}, {self.constant})"

    def __add__(self, other: Any) -> "LinForm":
        if isinstance(other, (int, Fraction)):
            return LinForm(self.terms, self.constant + other)
        if not isinstance(other, LinForm):
            return NotImplemented
        terms = dict(self.terms)
        for u, c in other.terms.items():
            terms[u] = terms.get(u, 0) + c
        return LinForm(terms, self.constant + other.constant)

    __radd__ = __add__

    def __neg__(self) -> "LinForm":
        return LinForm({u: -c for u, c in self.terms.items()}, -self.constant)

    def __sub__(self, other: Any) -> "LinForm":
        return self + (-other)

    def __rsub__(self, other: Any) -> "LinForm":
        return (-self) + other

    def __mul__(self, scalar: Any) -> "LinForm":
        if not isinstance(scalar, (int, Fraction)):
            return NotImplemented
        return LinForm({u: c * scalar for u, c in self.terms.items()}, self.constant * scalar)

    __rmul__ = __mul__

    def coefficient(self, u: Hashable) -> Fraction:
        return self.terms.get(u, Fraction(0))

    def evaluate(self, values: Mapping[Hashable, Fraction]) -> Fraction:
        missing = [u for u in self.terms if u not in values]
        if missing:
            raise InputError(f"no value supplied for {missing[0]}")
        return self.constant + sum((c * values[u] for u, c in self.terms.items()), Fraction(0))


class StatePoly:
    """Sparse polynomial in X, D1, D2, ... with exact coefficients.

    Zero coefficients are never stored; equality compares term maps.
    """

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping[StateMonomial, Any] | None = None):
        self.terms = {m: c for m, c in (terms or {}).items() if c}

    # -- constructors -------------------------------------------------
    @classmethod
    def constant(cls, c: Any) -> "StatePoly":
        return cls({ONE: c})

    @classmethod
    def monomial(cls, mono: StateMonomial, c: Any = 1) -> "StatePoly":
        return cls({mono: Fraction(c) if isinstance(c, int) else c})

    @classmethod
    def x(cls, power: int = 1) -> "StatePoly":
        return cls.monomial(StateMonomial((power,)))

    @classmethod
    def d(cls, order: int, power: int = 1) -> "StatePoly":
        """The variable ``D_order`` (``X`` when order is 0)."""
        if order == 0:
            return cls.x(power)
        return cls.monomial(StateMonomial.from_parts(0, {order: power}))

    # -- ring operations ----------------------------------------------
    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, StatePoly):
            return self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self == StatePoly.constant(Fraction(other))
        return NotImplemented

    def __hash__(self) -> int:
        return hash(frozenset(self.terms.items()))

    def __repr__(self) -> str:
        try:
            return f"StatePoly({self.render()})"
        except TypeError:
            return f"StatePoly({self.terms})"

    def __add__(self, other: Any) -> "StatePoly":
        if isinstance(other, (int, Fraction)):
            other = StatePoly.constant(Fraction(other))
        if not isinstance(other, StatePoly):
            return NotImplemented
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms[m] + c if m in terms else c
        return StatePoly(terms)

    __radd__ = __add__

    def __neg__(self) -> "StatePoly":
        return StatePoly({m: -c for m, c in self.terms.items()})

    def __sub__(self, other: Any) -> "StatePoly":
        return self + (-other)

    def __rsub__(self, other: Any) -> "StatePoly":
        return (-self) + other

    def __mul__(self, other: Any) -> "StatePoly":
        if isinstance(other, StatePoly):
            terms: Dict[StateMonomial, Any] = {}
            for ma, ca in self.terms.items():
                for mb, cb in other.terms.items():
                    m = ma * mb
                    c = ca * cb
                    terms[m] = terms[m] + c if m in terms else c
            return StatePoly(terms)
        if isinstance(other, (int, Fraction)):
            return StatePoly({m: c * other for m, c in self.terms.items()})
        return NotImplemented

    def __rmul__(self, other: Any) -> "StatePoly":
        if isinstance(other, (int, Fraction)):
            return self * other
        return NotImplemented

    def __pow__(self, e: int) -> "StatePoly":
        out = StatePoly.constant(Fraction(1))
        for _ in range(e):
            out = out * self
        return out

    # -- queries --------------------------------------------------------
    def items(self):
        return self.terms.items()

    def coefficient(self, mono: StateMonomial) -> Any:
        return self.terms.get(mono, Fraction(0))

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda mc: mc[0].sort_key())

    def weights(self) -> set:
        return {m.weight for m in self.terms}

    def grade_filter(self, weight: int) -> "StatePoly":
        return StatePoly({m: c for m, c in self.terms.items() if m.weight == weight})

    def map_coefficients(self, fn: Callable[[Any], Any]) -> "StatePoly":
        return StatePoly({m: fn(c) for m, c in self.terms.items()})

    def evaluate(self, x: Fraction, d_values: Mapping[int, Fraction] | Callable[[int], Fraction]) -> Fraction:
        """Substitute numbers for X and every D_t."""
        get = d_values if callable(d_values) else d_values.__getitem__
        total = Fraction(0)
        for m, c in self.terms.items():
            value = Fraction(x) ** m.x_exp
            for t, j in m.d_exps.items():
                value *= Fraction(get(t)) ** j
            total += c * value
        return total

    # -- text form ------------------------------------------------------
    def render(self) -> str:
        """Canonical text, e.g. ``3*X^2*D2 + 6*X*D1^2``."""
        if not self.terms:
            return "0"
        pieces = []
        for m, c in self.sorted_terms():
            if not isinstance(c, Fraction):
                raise TypeError("only rational coefficients have a text form")
            neg = c < 0
            mag = -c if neg else c
            if m == ONE:
                body = format_coefficient(mag)
            elif mag == 1:
                body = m.render()
            else:
                body = f"{format_coefficient(mag)}*{m.render()}"
            pieces.append((neg, body))
        neg, body = pieces[0]
        out = ("-" if neg else "") + body
        for neg, body in pieces[1:]:
            out += (" - " if neg else " + ") + body
        return out

    __str__ = render

    @classmethod
    def parse(cls, text: str) -> "StatePoly":
        """Inverse of :meth:`render` (also tolerant of extra whitespace)."""
        src = text.replace(" ", "")
        if not src:
            raise InputError("empty polynomial text")
        if src[0] not in "+-":
            src = "+" + src
        pos = 0
        result = StatePoly()
        for match in _TERM_RE.finditer(src):
            if match.start() != pos:
                raise InputError(f"cannot parse polynomial near column {pos + 1}: {text!r}")
            pos = match.end()
            sign, body = match.group(1), match.group(2)
            coef = Fraction(1)
            exps: Dict[int, int] = {}
            for factor in body.split("*"):
                fm = _FACTOR_RE.fullmatch(factor)
                if fm is None:
                    raise InputError(f"bad factor {factor!r} in {text!r}")
                if fm.group("num") is not None:
                    coef *= Fraction(int(fm.group("num")), int(fm.group("den") or 1))
                    continue
                slot = 0 if fm.group("var") == "X" else int(fm.group("order"))
                exps[slot] = exps.get(slot, 0) + int(fm.group("exp") or 1)
            if sign == "-":
                coef = -coef
            width = max(exps, default=0) + 1
            mono = StateMonomial(tuple(exps.get(s, 0) for s in range(width)))
            result = result + StatePoly({mono: coef})
        if pos != len(src):
            raise InputError(f"cannot parse polynomial near column {pos + 1}: {text!r}")
        return result


_TERM_RE = re.compile(r"([+-])([^+-]+)")
_FACTOR_RE = re.compile(
    r"(?P<num>\d+)(?:/(?P<den>\d+))?|(?P<var>X|D(?P<order>[1-9]\d*))(?:\^(?P<exp>\d+))?"
)


def poly_mul(a: StatePoly, b: StatePoly) -> StatePoly:
    return a * b


def grade_filter(p: StatePoly, weight: int) -> StatePoly:
    return p.grade_filter(weight)
