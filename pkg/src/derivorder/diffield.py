"""Concrete differential fields Q(t1, ..., tm) used as an independent oracle.

Partial derivatives ``d/dt_i`` are derivations of the rational function
field, so linear combinations of their compositions are concrete
differential operators.  Plugging them into an equation and evaluating at
a field element checks an identity without going through the symbolic
state-variable machinery at all.
"""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

from .algebra import MultiIndex, as_rational, format_rational, multinomial
from .config import DEFAULT_CONFIG, EngineConfig
from .equation import EquationSpec
from .errors import InputError
from .polyring import Poly, divide_exact, gcd, monomials_up_to


class FieldElement:
    """A reduced fraction of polynomials; the denominator is monic."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Optional[Poly] = None, *, reduced: bool = False):
        if den is None:
            den = Poly.const(num.m, 1)
        if not den:
            raise ZeroDivisionError("zero denominator")
        if num.m != den.m:
            raise ValueError("numerator and denominator in different rings")
        if not reduced:
            num, den = _reduce(num, den)
        self.num = num
        self.den = den

    @property
    def m(self) -> int:
        return self.num.m

    @classmethod
    def const(cls, m: int, c: Any) -> "FieldElement":
        return cls(Poly.const(m, as_rational(c)), reduced=True)

    @classmethod
    def var(cls, m: int, i: int) -> "FieldElement":
        return cls(Poly.var(m, i), reduced=True)

    def __bool__(self) -> bool:
        return bool(self.num)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            other = FieldElement.const(self.m, other)
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __repr__(self) -> str:
        return f"FieldElement({self.render()})"

    def render(self) -> str:
        if self.den.is_constant():
            return self.num.render()
        return f"({self.num.render()})/({self.den.render()})"

    def _lift(self, other: Any) -> "FieldElement":
        if isinstance(other, FieldElement):
            return other
        if isinstance(other, (int, Fraction)):
            return FieldElement.const(self.m, other)
        raise TypeError(f"cannot combine FieldElement with {type(other).__name__}")

    def __add__(self, other: Any) -> "FieldElement":
        other = self._lift(other)
        if self.den == other.den:
            return FieldElement(self.num + other.num, self.den)
        return FieldElement(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> "FieldElement":
        return FieldElement(-self.num, self.den, reduced=True)

    def __sub__(self, other: Any) -> "FieldElement":
        return self + (-self._lift(other))

    def __rsub__(self, other: Any) -> "FieldElement":
        return self._lift(other) - self

    def __mul__(self, other: Any) -> "FieldElement":
        other = self._lift(other)
        return FieldElement(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if not self.num:
            raise ZeroDivisionError("inverse of zero")
        return FieldElement(self.den, self.num)

    def __truediv__(self, other: Any) -> "FieldElement":
        return self * self._lift(other).inverse()

    def __pow__(self, k: int) -> "FieldElement":
        if k < 0:
            return self.inverse() ** (-k)
        return FieldElement(self.num ** k, self.den ** k, reduced=True)

    def partial(self, i: int) -> "FieldElement":
        return partial(i, self)


def _reduce(num: Poly, den: Poly) -> Tuple[Poly, Poly]:
    if not num:
        return num, Poly.const(num.m, 1)
    if not den.is_constant():
        g = gcd(num, den)
        if not g.is_constant():
            num, den = divide_exact(num, g), divide_exact(den, g)
    _, lc = den.leading()
    return num * (1 / lc), den * (1 / lc)


def partial(i: int, e: FieldElement) -> FieldElement:
    """``d/dt_i`` by the quotient rule."""
    if not 1 <= i <= e.m:
        raise InputError(f"variable index {i} outside t1..t{e.m}")
    if e.den.is_constant():
        return FieldElement(e.num.derivative(i), e.den, reduced=True)
    num = e.num.derivative(i) * e.den - e.num * e.den.derivative(i)
    return FieldElement(num, e.den * e.den)


# -- differential operators ------------------------------------------------


@dataclass(frozen=True)
class DiffOperator:
    """``sum c * d_{i1} o ... o d_{ir}``; an empty composition is the identity.

    Partial derivatives commute, so compositions are stored sorted and equal
    ones merged.
    """

    terms: Tuple[Tuple[Fraction, Tuple[int, ...]], ...]

    def __post_init__(self) -> None:
        merged: Dict[Tuple[int, ...], Fraction] = {}
        for c, comp in self.terms:
            key = tuple(sorted(int(v) for v in comp))
            if any(v < 1 for v in key):
                raise InputError("variable indices are 1-based")
            merged[key] = merged.get(key, 0) + as_rational(c)
        canon = tuple((c, comp) for comp, c in sorted(merged.items(), key=lambda kc: (len(kc[0]), kc[0])) if c)
        object.__setattr__(self, "terms", canon)

    @classmethod
    def identity(cls, c: Any = 1) -> "DiffOperator":
        return cls(((as_rational(c), ()),))

    @classmethod
    def zero(cls) -> "DiffOperator":
        return cls(())

    @classmethod
    def power(cls, var: int, k: int, c: Any = 1) -> "DiffOperator":
        return cls(((as_rational(c), (var,) * k),))

    @classmethod
    def from_derivation(cls, coeffs: Mapping[int, Any], derivation: Mapping[int, Any]) -> "DiffOperator":
        """``sum_j c_j d^j`` where ``d = sum_v a_v d/dt_v``."""
        deriv = {int(v): as_rational(a) for v, a in derivation.items() if a}
        vars_ = sorted(deriv)
        terms = []
        for j, c in coeffs.items():
            c = as_rational(c)
            if not c:
                continue
            for split in _weak_splits(int(j), len(vars_)):
                weight = multinomial(int(j), split)
                for v, s in zip(vars_, split):
                    weight *= deriv[v] ** s
                comp = tuple(v for v, s in zip(vars_, split) for _ in range(s))
                terms.append((c * weight, comp))
        return cls(tuple(terms))

    @property
    def order(self) -> int:
        return max((len(comp) for _, comp in self.terms), default=-1)

    def max_var(self) -> int:
        return max((max(comp) for _, comp in self.terms if comp), default=0)

    def apply(self, e: FieldElement) -> FieldElement:
        if self.max_var() > e.m:
            raise InputError(f"operator uses t{self.max_var()} but the field has {e.m} variables")
        memo: Dict[Tuple[int, ...], FieldElement] = {(): e}

        def get(comp: Tuple[int, ...]) -> FieldElement:
            if comp not in memo:
                memo[comp] = partial(comp[0], get(comp[1:]))
            return memo[comp]

        out = FieldElement.const(e.m, 0)
        for c, comp in self.terms:
            out = out + get(comp) * c
        return out

    __call__ = apply

    def to_json(self) -> Dict[str, Any]:
        return {"terms": [{"c": format_rational(c), "comp": list(comp)} for c, comp in self.terms]}

    @classmethod
    def from_json(cls, obj: Mapping[str, Any]) -> "DiffOperator":
        try:
            return cls(tuple((as_rational(t["c"]), tuple(t.get("comp", ()))) for t in obj["terms"]))
        except (KeyError, TypeError) as exc:
            raise InputError(f"malformed operator {obj!r}") from exc


def _weak_splits(k: int, parts: int):
    if parts == 0:
        if k == 0:
            yield ()
        return
    if parts == 1:
        yield (k,)
        return
    for first in range(k, -1, -1):
        for rest in _weak_splits(k - first, parts - 1):
            yield (first,) + rest


def apply_operator(op: DiffOperator, e: FieldElement) -> FieldElement:
    return op.apply(e)


# -- residuals ---------------------------------------------------------------


def _check_lengths(spec: EquationSpec, f_ops: Sequence[DiffOperator], g_ops: Sequence[DiffOperator]) -> None:
    if len(f_ops) != spec.n or len(g_ops) != spec.n:
        raise InputError(f"need {spec.n} f- and g-operators, got {len(f_ops)} and {len(g_ops)}")


def residual(
    spec: EquationSpec,
    f_ops: Sequence[DiffOperator],
    g_ops: Sequence[DiffOperator],
    x: FieldElement,
) -> FieldElement:
    """``sum_i c_i f_i(x^p_i) g_i(x^q_i)``; operators follow ``spec.terms`` order."""
    _check_lengths(spec, f_ops, g_ops)
    powers: Dict[int, FieldElement] = {}

    def power(k: int) -> FieldElement:
        if k not in powers:
            powers[k] = x ** k
        return powers[k]

    total = FieldElement.const(x.m, 0)
    for t, f, g in zip(spec.terms, f_ops, g_ops):
        total = total + f.apply(power(t.p)) * g.apply(power(t.q)) * t.coef
    return total


def symmetrized_residual(
    spec: EquationSpec,
    f_ops: Sequence[DiffOperator],
    g_ops: Sequence[DiffOperator],
    points: Sequence[FieldElement],
    config: EngineConfig | None = None,
) -> FieldElement:
    """Average over all orderings of ``points`` of the split products.

    A permutation only matters through which ``p_i`` points land in the
    ``f`` slot, and each subset arises ``p_i! (N - p_i)!`` times, so the
    average is taken over subsets with weight ``1 / C(N, p_i)``.
    """
    config = config or DEFAULT_CONFIG
    _check_lengths(spec, f_ops, g_ops)
    N = spec.N
    if N is None:
        raise InputError("symmetrization needs a homogeneous equation")
    if N > config.max_symmetrize:
        raise InputError(f"N={N} exceeds the symmetrization cap {config.max_symmetrize}")
    if len(points) != N:
        raise InputError(f"need exactly N={N} points, got {len(points)}")
    m = points[0].m
    one = FieldElement.const(m, 1)
    idx = range(N)
    total = FieldElement.const(m, 0)
    for t, f, g in zip(spec.terms, f_ops, g_ops):
        inner = FieldElement.const(m, 0)
        for chosen in itertools.combinations(idx, t.p):
            rest = [j for j in idx if j not in chosen]
            left = math.prod((points[j] for j in chosen), start=one)
            right = math.prod((points[j] for j in rest), start=one)
            inner = inner + f.apply(left) * g.apply(right)
        total = total + inner * (t.coef / math.comb(N, t.p))
    return total


def symmetrized_residual_bruteforce(
    spec: EquationSpec,
    f_ops: Sequence[DiffOperator],
    g_ops: Sequence[DiffOperator],
    points: Sequence[FieldElement],
) -> FieldElement:
    """The literal ``1/N! sum over permutations`` (factorial cost; for tests)."""
    N = spec.N
    m = points[0].m
    one = FieldElement.const(m, 1)
    total = FieldElement.const(m, 0)
    for perm in itertools.permutations(points):
        for t, f, g in zip(spec.terms, f_ops, g_ops):
            left = math.prod(perm[: t.p], start=one)
            right = math.prod(perm[t.p:], start=one)
            total = total + f.apply(left) * g.apply(right) * t.coef
    return total * Fraction(1, math.factorial(N))


# -- difference operators and moments ------------------------------------------


@dataclass(frozen=True)
class DeltaStack:
    """``Delta_{y_1} ... Delta_{y_m}`` with ``Delta_y F(x) = F(x + y) - F(x)``."""

    increments: Tuple[FieldElement, ...]

    def apply(self, F: Callable[[FieldElement], FieldElement], x: FieldElement) -> FieldElement:
        G = F
        for y in self.increments:
            G = _delta(G, y)
        return G(x)


def _delta(F: Callable[[FieldElement], FieldElement], y: FieldElement) -> Callable[[FieldElement], FieldElement]:
    return lambda z: F(z + y) - F(z)


def polarization_check(
    n: int,
    d: int,
    x: FieldElement,
    y: FieldElement | Sequence[FieldElement],
    steps: Optional[int] = None,
) -> bool:
    """Check the polarization identity for the trace ``A*(z) = (d/dt_d z)^n``.

    With one increment ``y`` applied ``steps`` times (default ``n``), the
    result must be ``n! * A*(y)`` when ``steps == n`` and 0 when
    ``steps > n``.  A list of ``n`` increments must give
    ``n! * prod_j d(y_j)``.
    """
    if n < 1:
        raise InputError("polarization needs n >= 1")
    if isinstance(y, FieldElement):
        ys = [y] * (n if steps is None else steps)
    else:
        ys = list(y)
    if len(ys) < n:
        raise InputError("polarization is only checked for at least n increments")

    def trace(z: FieldElement) -> FieldElement:
        return partial(d, z) ** n

    got = DeltaStack(tuple(ys)).apply(trace, x)
    if len(ys) > n:
        return not got
    expected = FieldElement.const(x.m, math.factorial(n))
    for yj in ys:
        expected = expected * partial(d, yj)
    return got == expected


def moment_operator(beta: MultiIndex, indices: Sequence[int]) -> DiffOperator:
    comp = tuple(v for v, b in zip(indices, beta.entries) for _ in range(b))
    return DiffOperator(((Fraction(1), comp),))


def moment_check(
    alpha: MultiIndex,
    indices: Sequence[int],
    x: FieldElement,
    y: FieldElement,
    config: EngineConfig | None = None,
) -> bool:
    """``phi_a(xy) = sum_{b <= a} C(a, b) phi_b(x) phi_{a-b}(y)`` with ``phi_a = d^a``."""
    config = config or DEFAULT_CONFIG
    if alpha.order > config.max_moment:
        raise InputError(f"|alpha|={alpha.order} exceeds the moment cap {config.max_moment}")
    if len(alpha) > len(indices):
        raise InputError("need one derivation index per multi-index entry")
    lhs = moment_operator(alpha, indices).apply(x * y)
    rhs = FieldElement.const(x.m, 0)
    for beta in alpha.lower_set():
        rest = alpha - beta
        rhs = rhs + moment_operator(beta, indices).apply(x) * moment_operator(rest, indices).apply(y) * alpha.binom(beta)
    return lhs == rhs


# -- sampling -----------------------------------------------------------------


def random_element(max_degree: int, m: int, seed: int, *, rational: bool = False, coef_range: int = 5) -> FieldElement:
    """Deterministic nonzero polynomial (or quotient of two) with small integer coefficients."""
    if m < 1 or max_degree < 0:
        raise InputError("need m >= 1 and max_degree >= 0")
    rng = random.Random(f"derivorder:{seed}:{max_degree}:{m}:{rational}")
    monos = list(monomials_up_to(m, max_degree))

    def draw(allow_constant: bool) -> Poly:
        while True:
            terms = {e: Fraction(rng.randint(-coef_range, coef_range)) for e in monos}
            p = Poly(m, terms)
            if p and (allow_constant or not p.is_constant() or max_degree == 0):
                return p

    num = draw(True)
    if not rational:
        return FieldElement(num, reduced=True)
    return FieldElement(num, draw(False))


def sample_points(count: int, m: int, seed: int, max_degree: int = 2, rational: bool = False) -> List[FieldElement]:
    return [random_element(max_degree, m, seed * 1000 + j, rational=rational) for j in range(count)]


# -- bridge from symbolic coefficients --------------------------------------------


@dataclass(frozen=True)
class FieldDerivation:
    """``d = sum_v a_v * d/dt_v`` with coefficients ``a_v`` in the field itself."""

    coeffs: Tuple[Tuple[int, FieldElement], ...]

    @classmethod
    def constant(cls, m: int, coeffs: Mapping[int, Any]) -> "FieldDerivation":
        return cls(tuple((int(v), FieldElement.const(m, a)) for v, a in sorted(coeffs.items()) if as_rational(a)))

    @classmethod
    def euler(cls, m: int) -> "FieldDerivation":
        """``sum_v v * t_v * d/dt_v``: monomials are eigenvectors, so ``d^j(x)`` never dies out."""
        return cls(tuple((v, FieldElement.var(m, v) * v) for v in range(1, m + 1)))

    def apply(self, e: FieldElement) -> FieldElement:
        out = FieldElement.const(e.m, 0)
        for v, a in self.coeffs:
            out = out + a * partial(v, e)
        return out

    __call__ = apply

    def render(self) -> str:
        return " + ".join(f"({a.render()})*d/dt{v}" for v, a in self.coeffs) or "0"


@dataclass(frozen=True)
class DerivationPolynomial:
    """``sum_j c_j d^j`` for one field derivation, applied by iterating ``d``."""

    coeffs: Tuple[Tuple[int, Fraction], ...]
    derivation: FieldDerivation

    def apply(self, e: FieldElement) -> FieldElement:
        wanted = {j: c for j, c in self.coeffs if c}
        out = FieldElement.const(e.m, 0)
        power = e
        for j in range(max(wanted, default=-1) + 1):
            if j:
                power = self.derivation.apply(power)
            if j in wanted:
                out = out + power * wanted[j]
        return out

    __call__ = apply


Derivation = Union[FieldDerivation, Mapping[int, Any]]


def _side_operator(coeffs: Mapping[int, Any], derivation: Derivation):
    if isinstance(derivation, FieldDerivation):
        return DerivationPolynomial(tuple(sorted((int(j), as_rational(c)) for j, c in coeffs.items())), derivation)
    return DiffOperator.from_derivation(coeffs, derivation)


def operators_from_coeffs(
    spec: EquationSpec,
    lam: Mapping[Tuple[int, int], Any],
    mu: Mapping[Tuple[int, int], Any],
    derivation: Derivation | None = None,
) -> Tuple[list, list]:
    """Turn per-term coefficient tables into concrete operators ``sum_j c_j d^j``.

    A mapping ``{v: a_v}`` with rational ``a_v`` gives a constant-coefficient
    operator (a :class:`DiffOperator`); a :class:`FieldDerivation` is iterated.
    """
    derivation = derivation or {1: 1}
    f_ops, g_ops = [], []
    for t in spec.terms:
        fc = {j: c for (i, j), c in lam.items() if i == t.i}
        gc = {j: c for (i, j), c in mu.items() if i == t.i}
        f_ops.append(_side_operator(fc, derivation))
        g_ops.append(_side_operator(gc, derivation))
    return f_ops, g_ops


def oracle_residuals(
    spec: EquationSpec,
    lam: Mapping[Tuple[int, int], Any],
    mu: Mapping[Tuple[int, int], Any],
    points: Iterable[FieldElement],
    derivation: Derivation | None = None,
) -> List[FieldElement]:
    f_ops, g_ops = operators_from_coeffs(spec, lam, mu, derivation)
    return [residual(spec, f_ops, g_ops, x) for x in points]


def check_witness_with_oracle(
    spec: EquationSpec,
    lam: Mapping[Tuple[int, int], Any],
    mu: Mapping[Tuple[int, int], Any],
    *,
    points: int = 3,
    seed: int = 0,
    m: int = 2,
    max_degree: int = 1,
) -> bool:
    # linear points keep x^N small; the Euler derivation keeps every d^j(x) nonzero
    xs = sample_points(points, m, seed, max_degree)
    derivation = FieldDerivation.euler(m)
    return all(not r for r in oracle_residuals(spec, lam, mu, xs, derivation))
