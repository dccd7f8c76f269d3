"""Powers of a single derivation applied to powers and products.

Two independent routes compute ``d^k(x^p)`` as a :class:`StatePoly`:

* :func:`expand_power` sums the closed multinomial formula over all weak
  compositions ``l_1 + ... + l_p = k``;
* :func:`expand_power_recursive` applies the formal derivation
  ``X -> D1, D_t -> D_{t+1}`` with the product rule ``k`` times.

They must agree term for term; the second one exists to check the first.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import factorial
from typing import Dict, Iterator, Optional, Tuple

from .algebra import MultiIndex, StateMonomial, StatePoly, multinomial
from .config import DEFAULT_CONFIG, EngineConfig
from .errors import InputError


def weak_compositions(k: int, p: int) -> Iterator[Tuple[int, ...]]:
    """All (l_1, ..., l_p) of nonnegative integers summing to k, lexicographically descending."""
    if p == 0:
        if k == 0:
            yield ()
        return
    if p == 1:
        yield (k,)
        return
    for first in range(k, -1, -1):
        for rest in weak_compositions(k - first, p - 1):
            yield (first,) + rest


def _check_caps(k: int, p: int, config: EngineConfig | None) -> None:
    config = config or DEFAULT_CONFIG
    if k < 0 or p < 0:
        raise InputError(f"order and power must be nonnegative (k={k}, p={p})")
    if k > config.max_order:
        raise InputError(f"order k={k} exceeds the configured cap {config.max_order}")
    if p > config.max_power:
        raise InputError(f"power p={p} exceeds the configured cap {config.max_power}")


@dataclass(frozen=True)
class ProductExpansion:
    """Coefficients of ``d^k(x_1 ... x_p)`` keyed by the composition (l_1, ..., l_p)."""

    arity: int
    order: int
    terms: Dict[Tuple[int, ...], Fraction]

    def __len__(self) -> int:
        return len(self.terms)


def expand_product(k: int, p: int, config: EngineConfig | None = None) -> ProductExpansion:
    if p < 1:
        raise InputError("product arity must be positive")
    _check_caps(k, p, config)
    return ProductExpansion(p, k, {ls: multinomial(k, ls) for ls in weak_compositions(k, p)})


def expand_power(k: int, p: int, config: EngineConfig | None = None) -> StatePoly:
    """``d^k(x^p)`` via the multinomial sum.  ``p = 0`` means the constant 1."""
    _check_caps(k, p, config)
    return _expand_power(k, p)


def sorted_compositions(k: int, p: int, cap: Optional[int] = None) -> Iterator[Tuple[int, ...]]:
    """Non-increasing weak compositions of k into p parts (one per permutation orbit)."""
    cap = k if cap is None else cap
    if p == 0:
        if k == 0:
            yield ()
        return
    for first in range(min(k, cap), -1, -1):
        if first * p < k:
            break
        for rest in sorted_compositions(k - first, p - 1, first):
            yield (first,) + rest


@lru_cache(maxsize=None)
def _expand_power(k: int, p: int) -> StatePoly:
    # Sum of multinomial(k, ls) over all weak compositions ls, taken one
    # permutation orbit at a time: every rearrangement of ls has the same
    # multinomial and the same monomial, and an orbit with multiplicities
    # j_0, j_1, ... has p! / prod j_t! members.
    if p == 0:
        return StatePoly.constant(Fraction(1)) if k == 0 else StatePoly()
    acc: Dict[StateMonomial, int] = {}
    for ls in sorted_compositions(k, p):
        # the factor d^{l}(x) is X when l = 0, D_l otherwise
        exps = [0] * (ls[0] + 1)
        for l in ls:
            exps[l] += 1
        orbit = factorial(p)
        for j in exps:
            orbit //= factorial(j)
        mono = StateMonomial(tuple(exps))
        acc[mono] = acc.get(mono, 0) + orbit * int(multinomial(k, ls))
    return StatePoly({m: Fraction(c) for m, c in acc.items()})


def formal_derivative(poly: StatePoly) -> StatePoly:
    """Apply the derivation ``X -> D1``, ``D_t -> D_{t+1}`` extended by the product rule."""
    out: Dict[StateMonomial, Fraction] = {}
    for mono, c in poly.items():
        exps = mono.exps
        for slot, e in enumerate(exps):
            if not e:
                continue
            new = list(exps) + [0]
            new[slot] -= 1
            new[slot + 1] += 1
            m = StateMonomial(tuple(new))
            out[m] = out.get(m, 0) + c * e
    return StatePoly(out)


def expand_power_recursive(k: int, p: int, config: EngineConfig | None = None) -> StatePoly:
    _check_caps(k, p, config)
    poly = StatePoly.constant(Fraction(1)) if p == 0 else StatePoly.x(p)
    for _ in range(k):
        poly = formal_derivative(poly)
    return poly


# -- several derivations ------------------------------------------------

MultiMonomial = Tuple[Tuple[MultiIndex, int], ...]


def _multi_key(factors: Dict[MultiIndex, int]) -> MultiMonomial:
    return tuple(sorted(factors.items(), key=lambda be: (be[0].order, be[0].entries)))


def bell_expand(alpha: MultiIndex, p: int = 1, config: EngineConfig | None = None) -> Dict[MultiMonomial, Fraction]:
    """``d^alpha(x^p)`` for commuting derivations ``d_1, ..., d_r``.

    The result maps a monomial ``prod d^beta(x)^e`` (``beta = 0`` is ``x``
    itself) to its coefficient.  Each ordered split
    ``alpha = beta_1 + ... + beta_p`` contributes the product of the
    per-derivation multinomials.
    """
    _check_caps(alpha.order, p, config)
    if p == 0:
        return {(): Fraction(1)} if alpha.order == 0 else {}
    r = len(alpha)
    per_axis = [list(weak_compositions(alpha[j], p)) for j in range(r)]
    out: Dict[MultiMonomial, Fraction] = {}

    def rec(axis: int, chosen: list) -> None:
        if axis == r:
            coef = 1
            for j, ls in enumerate(chosen):
                coef *= int(multinomial(alpha[j], ls))
            factors: Dict[MultiIndex, int] = {}
            for slot in range(p):
                beta = MultiIndex(ls[slot] for ls in chosen)
                factors[beta] = factors.get(beta, 0) + 1
            key = _multi_key(factors)
            out[key] = out.get(key, 0) + Fraction(coef)
            return
        for ls in per_axis[axis]:
            rec(axis + 1, chosen + [ls])

    rec(0, [])
    return {m: c for m, c in out.items() if c}


def collapse_to_single(expansion: Dict[MultiMonomial, Fraction]) -> StatePoly:
    """Replace every ``d^beta(x)`` by ``D_{|beta|}`` (one derivation for all)."""
    out = StatePoly()
    for factors, c in expansion.items():
        term = StatePoly.constant(c)
        for beta, e in factors:
            term = term * StatePoly.d(beta.order, e)
        out = out + term
    return out


def composition_count(k: int, p: int) -> int:
    return math.comb(k + p - 1, p - 1)
