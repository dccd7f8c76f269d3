"""Differential-operator ansatz and the constraint system it induces.

Each unknown function is written as ``f_i = sum_j lambda_{i,j} d^j`` and
``g_i = sum_j mu_{i,j} d^j`` with ``d^0 = id``.  Expanding the equation
gives a polynomial in the state variables whose coefficients are linear in
the products ``pi_{i,k,l} = lambda_{i,k} * mu_{i,l}``; by algebraic
independence each coefficient must vanish.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Mapping, NamedTuple, Optional, Sequence, Tuple

from .algebra import LinForm, StateMonomial, StatePoly, as_rational, format_rational
from .config import DEFAULT_CONFIG, EngineConfig
from .equation import EquationSpec, Term
from .errors import InputError
from .leibniz import expand_power


class ProductUnknown(NamedTuple):
    """The product ``lambda_{i,k} * mu_{i,l}`` for the term labelled ``i``."""

    i: int
    k: int
    l: int

    def to_json(self) -> Dict[str, int]:
        return {"i": self.i, "k": self.k, "l": self.l}


@dataclass(frozen=True)
class AnsatzSpec:
    """Maximal orders per term label.  Pinned sides always get order 0."""

    f_orders: Tuple[Tuple[int, int], ...]  # (label, k_i)
    g_orders: Tuple[Tuple[int, int], ...]  # (label, l_i)

    @classmethod
    def uniform(cls, spec: EquationSpec, k: int, l: int) -> "AnsatzSpec":
        return cls.per_term(spec, {t.i: k for t in spec.terms}, {t.i: l for t in spec.terms})

    @classmethod
    def per_term(cls, spec: EquationSpec, f_orders: Mapping[int, int], g_orders: Mapping[int, int]) -> "AnsatzSpec":
        fo, go = [], []
        for t in spec.by_label():
            k = 0 if t.f_pinned else int(f_orders[t.i])
            l = 0 if t.g_pinned else int(g_orders[t.i])
            if k < 0 or l < 0:
                raise InputError("ansatz orders must be nonnegative")
            fo.append((t.i, k))
            go.append((t.i, l))
        return cls(tuple(fo), tuple(go))

    def f_order(self, i: int) -> int:
        return dict(self.f_orders)[i]

    def g_order(self, i: int) -> int:
        return dict(self.g_orders)[i]

    def unknowns(self) -> List[ProductUnknown]:
        go = dict(self.g_orders)
        return [
            ProductUnknown(i, k, l)
            for i, kmax in self.f_orders
            for k in range(kmax + 1)
            for l in range(go[i] + 1)
        ]


@dataclass
class ConstraintSystem:
    """Rows ``monomial -> linear form in pi``; every row must vanish."""

    spec: EquationSpec
    ansatz: AnsatzSpec
    rows: Dict[StateMonomial, LinForm]
    unknowns: List[ProductUnknown]

    def sorted_rows(self) -> List[Tuple[StateMonomial, LinForm]]:
        return sorted(self.rows.items(), key=lambda mr: mr[0].sort_key())

    def matrix(self, unknowns: Optional[Sequence[ProductUnknown]] = None):
        """Dense coefficient matrix; columns follow ``unknowns``."""
        from .linalg import ExactMatrix

        cols = list(unknowns if unknowns is not None else self.unknowns)
        rows = [[form.coefficient(u) for u in cols] for _, form in self.sorted_rows()]
        return ExactMatrix(rows, ncols=len(cols))

    def to_json(self) -> Dict[str, Any]:
        order = {u: pos for pos, u in enumerate(self.unknowns)}
        rows = []
        for mono, form in self.sorted_rows():
            coeffs = [
                {"i": u.i, "k": u.k, "l": u.l, "c": format_rational(c)}
                for u, c in sorted(form.terms.items(), key=lambda uc: order[uc[0]])
            ]
            rows.append({"monomial": mono.render(), "coeffs": coeffs})
        return {"equation": self.spec.to_json(), "unknowns": len(self.unknowns), "rows": rows}


def term_product(k: int, p: int, l: int, q: int, config: EngineConfig | None = None) -> StatePoly:
    """``d^k(x^p) * d^l(x^q)``; cached through the expansion memo."""
    return expand_power(k, p, config) * expand_power(l, q, config)


def expand_equation(
    spec: EquationSpec,
    ansatz: AnsatzSpec,
    config: EngineConfig | None = None,
    weights: Optional[Iterable[int]] = None,
) -> ConstraintSystem:
    """Collect coefficients of the expanded ansatz per state monomial.

    ``weights`` restricts the system to the given derivative-weight layers.
    The product ``pi_{i,k,l}`` only feeds monomials of weight ``k + l``, so
    the full system is block diagonal by weight and a restricted system is
    exactly one or more of those blocks.
    """
    config = config or DEFAULT_CONFIG
    if spec.N is None:
        raise InputError("expand_equation needs a homogeneous equation (single N); homogenize first")
    keep = None if weights is None else set(weights)
    unknowns = [u for u in ansatz.unknowns() if keep is None or u.k + u.l in keep]
    acc: Dict[StateMonomial, Dict[ProductUnknown, Fraction]] = {}
    for u in unknowns:
        t = spec.term(u.i)
        for mono, c in term_product(u.k, t.p, u.l, t.q, config).items():
            row = acc.setdefault(mono, {})
            row[u] = row.get(u, 0) + c * t.coef
    rows = {m: LinForm(r) for m, r in acc.items()}
    return ConstraintSystem(spec, ansatz, {m: f for m, f in rows.items() if f}, unknowns)


Coeffs = Mapping[Tuple[int, int], Any]


def _coerce(coeffs: Coeffs) -> Dict[Tuple[int, int], Fraction]:
    return {(int(i), int(j)): as_rational(c) for (i, j), c in coeffs.items()}


def product_values(system: ConstraintSystem, lam: Coeffs, mu: Coeffs) -> Dict[ProductUnknown, Fraction]:
    lam, mu = _coerce(lam), _coerce(mu)
    values = {}
    for u in system.unknowns:
        try:
            values[u] = lam[(u.i, u.k)] * mu[(u.i, u.l)]
        except KeyError as exc:
            raise InputError(f"missing coefficient {exc.args[0]} for term {u.i}") from exc
    return values


def instantiate(system: ConstraintSystem, lam: Coeffs, mu: Coeffs) -> StatePoly:
    """Residual of the concrete operators; zero iff they solve the equation."""
    values = product_values(system, lam, mu)
    return StatePoly({m: form.evaluate(values) for m, form in system.rows.items()})


def operator_poly(coeffs: Mapping[int, Fraction], p: int, config: EngineConfig | None = None) -> StatePoly:
    """``sum_j c_j d^j(x^p)`` as a state polynomial."""
    out = StatePoly()
    for j, c in sorted(coeffs.items()):
        if c:
            out = out + expand_power(j, p, config) * Fraction(c)
    return out


def split_coeffs(coeffs: Coeffs) -> Dict[int, Dict[int, Fraction]]:
    out: Dict[int, Dict[int, Fraction]] = {}
    for (i, j), c in _coerce(coeffs).items():
        out.setdefault(i, {})[j] = c
    return out


def direct_residual(spec: EquationSpec, lam: Coeffs, mu: Coeffs, config: EngineConfig | None = None) -> StatePoly:
    """Expand the concrete operators directly, bypassing the pi unknowns."""
    lam_by, mu_by = split_coeffs(lam), split_coeffs(mu)
    out = StatePoly()
    for t in spec.terms:
        f_side = operator_poly(lam_by.get(t.i, {}), t.p, config)
        g_side = operator_poly(mu_by.get(t.i, {}), t.q, config)
        out = out + f_side * g_side * t.coef
    return out


def coeffs_to_json(coeffs: Coeffs) -> List[Dict[str, Any]]:
    return [
        {"i": i, "j": j, "c": format_rational(c)}
        for (i, j), c in sorted(_coerce(coeffs).items())
    ]


def coeffs_from_json(items: Iterable[Mapping[str, Any]]) -> Dict[Tuple[int, int], Fraction]:
    try:
        return {(int(it["i"]), int(it["j"])): as_rational(it["c"]) for it in items}
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed coefficient list: {exc}") from exc
