"""The two-term special cases ``f(x^p)g(x^(N-p)) = kappa f(x^q)g(x^(N-q))``
and ``f(x^p)f(x^(N-p)) = g(x^q)g(x^(N-q))``.

For ``f = d`` each side expands to a single monomial ``X^(N-2) D1^2``, so
the constant relating the two sides is read off the expansion rather than
assumed.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import isqrt
from typing import Any, Dict, List, Optional

from .algebra import StatePoly, format_rational
from .ansatz import direct_residual
from .diffield import DiffOperator, FieldElement, residual, sample_points
from .equation import EquationSpec, Term
from .errors import InputError


def _check_triple(p: int, q: int, N: int) -> None:
    if not (0 < p < N and 0 < q < N) or p == q or q == N - p:
        raise InputError("need distinct p, q strictly below N with q != N - p")


def kappa_value(p: int, q: int, N: int) -> Fraction:
    _check_triple(p, q, N)
    return Fraction(p * (N - p), q * (N - q))


def kappa_spec(p: int, q: int, N: int, kappa: Any) -> EquationSpec:
    """``f(x^p) g(x^(N-p)) - kappa f(x^q) g(x^(N-q)) = 0`` with shared f and g."""
    _check_triple(p, q, N)
    return EquationSpec((
        Term(1, p, N - p, f_name="f", g_name="g"),
        Term(2, q, N - q, coef=-Fraction(kappa), f_name="f", g_name="g"),
    ))


def _same_on_both_terms(order: int, c: Any = 1) -> Dict:
    coeffs = {}
    for i in (1, 2):
        for j in range(order + 1):
            coeffs[(i, j)] = Fraction(c) if j == order else Fraction(0)
    return coeffs


def kappa_symbolic_residual(p: int, q: int, N: int, kappa: Any, order: int = 1, c: Any = 1) -> StatePoly:
    """Residual with ``f = g = c d^order`` (order 0 gives the identity multiple)."""
    spec = kappa_spec(p, q, N, kappa)
    coeffs = _same_on_both_terms(order, c)
    return direct_residual(spec, coeffs, coeffs)


def kappa_oracle_residual(p: int, q: int, N: int, kappa: Any, x: FieldElement,
                          f: Optional[DiffOperator] = None, g: Optional[DiffOperator] = None) -> FieldElement:
    """Residual in Q(t1, ..., tm) with ``f = d/dt1`` and ``g = d/dt2`` by default."""
    spec = kappa_spec(p, q, N, kappa)
    f = f or DiffOperator.power(1, 1)
    g = g or DiffOperator.power(2, 1)
    return residual(spec, [f, f], [g, g], x)


@dataclass(frozen=True)
class AlphaReport:
    """What expansion forces on ``g = alpha f`` when ``f`` is a derivation."""

    p: int
    q: int
    N: int
    alpha_squared: Fraction
    stated_alpha: Fraction

    @property
    def stated_alpha_solves(self) -> bool:
        return self.stated_alpha ** 2 == self.alpha_squared

    @property
    def rational_alpha(self) -> Optional[Fraction]:
        a = self.alpha_squared
        rn, rd = isqrt(a.numerator), isqrt(a.denominator)
        if rn * rn == a.numerator and rd * rd == a.denominator:
            return Fraction(rn, rd)
        return None

    @property
    def flagged(self) -> bool:
        return not self.stated_alpha_solves

    def to_json(self) -> Dict[str, Any]:
        root = self.rational_alpha
        return {
            "p": self.p,
            "q": self.q,
            "N": self.N,
            "forced_alpha_squared": format_rational(self.alpha_squared),
            "forced_alpha": format_rational(root) if root is not None else None,
            "stated_alpha": format_rational(self.stated_alpha),
            "stated_alpha_solves": self.stated_alpha_solves,
            "flag": (
                "stated alpha p(N-p)/(q(N-q)) only solves the equation when that ratio is 1; "
                "expansion forces alpha^2 = p(N-p)/(q(N-q))"
                if self.flagged else None
            ),
        }


def alpha_spec(p: int, q: int, N: int) -> EquationSpec:
    """``f(x^p) f(x^(N-p)) - g(x^q) g(x^(N-q)) = 0``."""
    _check_triple(p, q, N)
    return EquationSpec((
        Term(1, p, N - p, f_name="f", g_name="f"),
        Term(2, q, N - q, coef=-1, f_name="g", g_name="g"),
    ))


def alpha_report(p: int, q: int, N: int) -> AlphaReport:
    """Derive ``alpha^2`` from the expansions with ``f = d`` and ``g = d``.

    With ``g = alpha d`` the second term scales by ``alpha^2``, so the
    residual is ``F + alpha^2 G`` where ``F`` and ``G`` are the two term
    expansions; every monomial must give the same ratio ``-F/G``.
    """
    spec = alpha_spec(p, q, N)
    d_only = {(i, j): Fraction(int(j == 1)) for i in (1, 2) for j in (0, 1)}
    f_part = direct_residual(spec, {k: v for k, v in d_only.items() if k[0] == 1},
                             {k: v for k, v in d_only.items() if k[0] == 1})
    g_part = direct_residual(spec, {k: v for k, v in d_only.items() if k[0] == 2},
                             {k: v for k, v in d_only.items() if k[0] == 2})
    ratios = set()
    for mono in set(f_part.terms) | set(g_part.terms):
        gc = g_part.coefficient(mono)
        if not gc:
            raise InputError("the g side does not cover the f side; no alpha works")
        ratios.add(-f_part.coefficient(mono) / gc)
    if len(ratios) != 1:
        raise InputError("no single alpha^2 balances the expansion")
    return AlphaReport(p, q, N, ratios.pop(), kappa_value(p, q, N))


def alpha_oracle_zero(report: AlphaReport, points: int = 3, seed: int = 0) -> List[bool]:
    """Check ``f(x^p)f(x^(N-p)) = alpha^2 f(x^q)f(x^(N-q))`` for ``f = d/dt1`` at sample points."""
    spec = kappa_spec(report.p, report.q, report.N, report.alpha_squared)
    d1 = DiffOperator.power(1, 1)
    return [not residual(spec, [d1, d1], [d1, d1], x) for x in sample_points(points, 2, seed)]
