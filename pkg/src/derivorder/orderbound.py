"""Order bounds for derivation solutions.

The question asked at each grid cell ``(k, l)`` is whether some term can
have an ``f``-operator of exact order ``k`` and a ``g``-operator of exact
order ``l`` simultaneously, where ``k`` and ``l`` are the maximal orders
over all terms.  The products ``pi_{i,k,l}`` are the only unknowns that
reach derivative weight ``k + l``, so that weight layer alone decides the
answer: if its matrix has full column rank every ``pi_{i,k,l}`` is forced
to zero (``Infeasible``); otherwise a nullspace vector yields an explicit
solution (``WitnessFound``).
"""
from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Iterator, List, Optional, Sequence, Tuple, Union

from .algebra import falling_factorial, format_rational
from .ansatz import (
    AnsatzSpec,
    ConstraintSystem,
    ProductUnknown,
    coeffs_to_json,
    expand_equation,
    instantiate,
)
from .config import EngineConfig
from .equation import EquationSpec, Term, check_conditions
from .errors import InputError, InvariantError
from .linalg import ExactMatrix, is_consistent

Coeffs = Dict[Tuple[int, int], Fraction]


# -- verdicts -------------------------------------------------------------


@dataclass(frozen=True)
class Infeasible:
    """Every listed top product is forced to zero by the constraints."""

    certificate: Tuple[ProductUnknown, ...]
    rank: int = 0
    kind: str = field(default="infeasible", init=False)

    def to_json(self) -> Dict[str, Any]:
        return {
            "verdict": self.kind,
            "rank": self.rank,
            "forced_zero": [u.to_json() for u in self.certificate],
        }


@dataclass(frozen=True)
class WitnessFound:
    lam: Coeffs
    mu: Coeffs
    oracle_points: int = 0
    kind: str = field(default="witness", init=False)

    def to_json(self) -> Dict[str, Any]:
        return {
            "verdict": self.kind,
            "lambda": coeffs_to_json(self.lam),
            "mu": coeffs_to_json(self.mu),
            "oracle_points": self.oracle_points,
        }


@dataclass(frozen=True)
class Undetermined:
    reason: str
    kind: str = field(default="undetermined", init=False)

    def to_json(self) -> Dict[str, Any]:
        return {"verdict": self.kind, "reason": self.reason}


Verdict = Union[Infeasible, WitnessFound, Undetermined]


# -- feasibility ----------------------------------------------------------


def require_conditions(spec: EquationSpec) -> None:
    report = check_conditions(spec)
    problems = []
    if not report.c1.passed:
        problems.append(f"C(i) fails: terms {report.c1.witness} share the same p")
    if not report.c2.passed:
        problems.append(f"C(ii) fails: several degrees {list(report.c2.witness)}; homogenize first")
    if not report.c3.passed:
        i, j = report.c3.witness
        problems.append(f"C(iii) fails: p of term {i} equals q of term {j}")
    if problems:
        raise InputError("order bounds need C(i)-C(iii): " + "; ".join(problems))


def top_layer(spec: EquationSpec, k: int, l: int, config: EngineConfig | None = None) -> ConstraintSystem:
    """The weight ``k + l`` block of the constraint system at uniform orders ``(k, l)``."""
    ansatz = AnsatzSpec.uniform(spec, k, l)
    system = expand_equation(spec, ansatz, config, weights=[k + l])
    system.unknowns = [u for u in system.unknowns if u.k == k and u.l == l]
    return system


def _witness_from_vector(spec: EquationSpec, ansatz: AnsatzSpec, top: Sequence[ProductUnknown], vec) -> Tuple[Coeffs, Coeffs]:
    """Operators ``f_i = d^k`` and ``g_i = v_i d^l`` (zero where ``v_i = 0``)."""
    lam: Coeffs = {}
    mu: Coeffs = {}
    for t in spec.terms:
        for j in range(ansatz.f_order(t.i) + 1):
            lam[(t.i, j)] = Fraction(0)
        for j in range(ansatz.g_order(t.i) + 1):
            mu[(t.i, j)] = Fraction(0)
    for u, v in zip(top, vec):
        if v:
            lam[(u.i, u.k)] = Fraction(1)
            mu[(u.i, u.l)] = Fraction(v)
    return lam, mu


def verify_witness(
    spec: EquationSpec,
    k: int,
    l: int,
    lam: Coeffs,
    mu: Coeffs,
    config: EngineConfig | None = None,
) -> bool:
    """Full-system residual is zero and some term attains orders (k, l)."""
    ansatz = AnsatzSpec.uniform(spec, k, l)
    system = expand_equation(spec, ansatz, config)
    if instantiate(system, lam, mu):
        return False
    return any(
        lam.get((t.i, k), 0) and mu.get((t.i, l), 0)
        for t in spec.terms
    )


def verify_certificate(spec: EquationSpec, k: int, l: int, verdict: Infeasible, config: EngineConfig | None = None) -> bool:
    """Re-check by a second route: adding ``pi = 1`` for any certified unknown is inconsistent."""
    system = top_layer(spec, k, l, config)
    if set(verdict.certificate) != set(system.unknowns):
        return False
    cols = system.unknowns
    base = system.matrix(cols)
    zeros = [Fraction(0)] * len(base.rows)
    for u in verdict.certificate:
        unit = [Fraction(int(c == u)) for c in cols]
        if is_consistent(base.stack([unit]), zeros + [Fraction(1)]):
            return False
    return True


def top_order_feasible(
    spec: EquationSpec,
    k: int,
    l: int,
    *,
    oracle_points: int = 0,
    oracle_vars: int = 2,
    seed: int = 0,
    config: EngineConfig | None = None,
) -> Verdict:
    """Can some term carry operators of exact orders ``(k, l)`` in a solution?"""
    require_conditions(spec)
    if k < 0 or l < 0:
        raise InputError("orders must be nonnegative")
    system = top_layer(spec, k, l, config)
    top = system.unknowns
    if not top:
        # every term has a pinned side that cannot reach the requested order
        return Infeasible((), 0)
    matrix = system.matrix(top)
    rank = matrix.rank()
    if rank == len(top):
        return Infeasible(tuple(top), rank)
    basis = matrix.nullspace()
    ansatz = AnsatzSpec.uniform(spec, k, l)
    lam, mu = _witness_from_vector(spec, ansatz, top, basis[0])
    if not verify_witness(spec, k, l, lam, mu, config):
        raise InvariantError(f"nullspace witness failed to verify at (k, l) = ({k}, {l})")
    if oracle_points:
        from .diffield import check_witness_with_oracle

        if not check_witness_with_oracle(spec, lam, mu, points=oracle_points, seed=seed, m=oracle_vars):
            return Undetermined("symbolic witness verified but the field oracle disagreed")
    return WitnessFound(lam, mu, oracle_points)


@dataclass
class ScanResult:
    spec: EquationSpec
    k_max: int
    l_max: int
    grid: Dict[Tuple[int, int], Verdict]

    def _bound(self, axis: int) -> Optional[int]:
        open_cells = [cell[axis] for cell, v in self.grid.items() if not isinstance(v, Infeasible)]
        return max(open_cells) if open_cells else None

    @property
    def bound_k(self) -> Optional[int]:
        return self._bound(0)

    @property
    def bound_l(self) -> Optional[int]:
        return self._bound(1)

    @property
    def certified_bound(self) -> Optional[int]:
        """Largest order not ruled out on either side (None: only f = g = 0 survives)."""
        found = [b for b in (self.bound_k, self.bound_l) if b is not None]
        return max(found) if found else None

    def to_json(self) -> Dict[str, Any]:
        return {
            "k_max": self.k_max,
            "l_max": self.l_max,
            "grid": [
                {"k": k, "l": l, **self.grid[(k, l)].to_json()}
                for k, l in sorted(self.grid)
            ],
            "bound_k": self.bound_k,
            "bound_l": self.bound_l,
            "certified_bound": self.certified_bound,
        }


def max_order_scan(
    spec: EquationSpec,
    k_max: int,
    l_max: int,
    *,
    oracle_points: int = 0,
    oracle_vars: int = 2,
    seed: int = 0,
    config: EngineConfig | None = None,
) -> ScanResult:
    require_conditions(spec)
    grid = {
        (k, l): top_order_feasible(
            spec, k, l, oracle_points=oracle_points, oracle_vars=oracle_vars, seed=seed, config=config
        )
        for k in range(k_max + 1)
        for l in range(l_max + 1)
    }
    return ScanResult(spec, k_max, l_max, grid)


# -- Vandermonde-type matrices -------------------------------------------


def vandermonde_system(p: Sequence[int], q: Sequence[int], depth: int, kind: str) -> ExactMatrix:
    """Coefficient matrices of the three cases of the order-bound argument.

    ``case1``: rows ``r = 1..depth`` with entries ``(p_i)_r * q_i`` (falling factorial).
    ``case2``: rows ``r = 1..depth`` with entries ``(p_i)_r * (q_i)_r``.
    ``case3``: rows ``j = 0..depth-1`` with entries ``p_i^(j+1) * q_i``.
    """
    if len(p) != len(q) or not p:
        raise InputError("p and q must be nonempty and of equal length")
    if depth < 1:
        raise InputError("depth must be positive")
    if kind == "case1":
        if depth > max(p):
            raise InputError(f"case1 has only {max(p)} nonzero rows for these p")
        rows = [[falling_factorial(pi, r) * qi for pi, qi in zip(p, q)] for r in range(1, depth + 1)]
    elif kind == "case2":
        if depth > min(max(p), max(q)):
            raise InputError(f"case2 has only {min(max(p), max(q))} nonzero rows for these p, q")
        rows = [[falling_factorial(pi, r) * falling_factorial(qi, r) for pi, qi in zip(p, q)] for r in range(1, depth + 1)]
    elif kind == "case3":
        rows = [[pi ** (j + 1) * qi for pi, qi in zip(p, q)] for j in range(depth)]
    else:
        raise InputError(f"unknown kind {kind!r}; expected case1, case2 or case3")
    return ExactMatrix(rows)


def binomial_product_matrix(p: Sequence[int], q: Sequence[int]) -> ExactMatrix:
    """Row ``r`` (1..n) sums ``(p_i)_a (q_i)_b`` over ``a + b = r + 1`` with ``a, b >= 1``."""
    n = len(p)
    rows = []
    for r in range(1, n + 1):
        rows.append([
            sum(falling_factorial(pi, a) * falling_factorial(qi, r + 1 - a) for a in range(1, r + 1))
            for pi, qi in zip(p, q)
        ])
    return ExactMatrix(rows)


# -- admissible exponent sets ----------------------------------------------


def is_admissible(p: Sequence[int], N: int) -> bool:
    q = [N - x for x in p]
    return (
        len(set(p)) == len(p)
        and all(x >= 1 for x in p + q)
        and not set(p) & set(q)
    )


def admissible_specs(n: int, N_max: int, N_min: int = 2) -> Iterator[EquationSpec]:
    """All equations with n terms, common degree N <= N_max, satisfying C(i)-C(iii)."""
    for N in range(N_min, N_max + 1):
        for p in itertools.combinations(range(1, N), n):
            if is_admissible(list(p), N):
                yield EquationSpec.from_pairs([(x, N - x) for x in p])


def random_admissible(rng: random.Random, n: int, N_max: int = 40, tries: int = 200) -> Optional[Tuple[List[int], List[int]]]:
    for _ in range(tries):
        N = rng.randint(2 * n + 1, max(2 * n + 1, N_max))
        p = sorted(rng.sample(range(1, N), n))
        if is_admissible(p, N):
            return p, [N - x for x in p]
    return None


@dataclass
class RankRecord:
    p: List[int]
    q: List[int]
    kind: str
    rank: int
    full: bool

    def to_json(self) -> Dict[str, Any]:
        return {"p": self.p, "q": self.q, "kind": self.kind, "rank": self.rank, "full": self.full}


def rank_experiment(draws: int, n_max: int = 6, seed: int = 0) -> List[RankRecord]:
    """Ranks of the case matrices and the mixed binomial-product matrix on random draws."""
    rng = random.Random(seed)
    records = []
    for _ in range(draws):
        n = rng.randint(1, n_max)
        drawn = random_admissible(rng, n)
        if drawn is None:
            continue
        p, q = drawn
        for kind in ("case1", "case3", "mixed"):
            if kind == "mixed":
                m = binomial_product_matrix(p, q)
            else:
                m = vandermonde_system(p, q, n, kind)
            rank = m.rank()
            records.append(RankRecord(p, q, kind, rank, rank == n))
    return records


# -- sharpness family ----------------------------------------------------


@dataclass(frozen=True)
class BinomialFamily:
    n: int
    N: int
    spec: EquationSpec
    lam: Coeffs
    mu: Coeffs

    @property
    def order(self) -> int:
        return self.n - 1

    @property
    def weights(self) -> List[int]:
        return [(-1) ** i * math.comb(self.n, i) for i in range(1, self.n + 1)]


def binomial_family(n: int, N: int) -> BinomialFamily:
    """``sum_i (-1)^i C(n, i) f(x^i) x^(N-i) = 0`` with ``f = d^(n-1)``."""
    if n < 1 or N < n:
        raise InputError("binomial family needs n >= 1 and N >= n")
    terms = tuple(Term(i, i, N - i, g_pinned=True, f_name="f") for i in range(1, n + 1))
    spec = EquationSpec(terms)
    lam: Coeffs = {}
    mu: Coeffs = {}
    for i in range(1, n + 1):
        for j in range(n):
            lam[(i, j)] = Fraction(0)
        lam[(i, n - 1)] = Fraction((-1) ** i * math.comb(n, i))
        mu[(i, 0)] = Fraction(1)
    return BinomialFamily(n, N, spec, lam, mu)


def format_coeff_table(coeffs: Coeffs) -> str:
    return ", ".join(f"({i},{j})={format_rational(c)}" for (i, j), c in sorted(coeffs.items()) if c)
