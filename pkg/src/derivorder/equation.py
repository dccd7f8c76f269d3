"""The equation model: terms, the three admissibility conditions, homogenization.

An equation is ``sum_i c_i * f_i(x^{p_i}) * g_i(x^{q_i}) = 0``.  A side may
be *pinned*, meaning the function is a constant multiple of the identity;
pinned sides are how the DSL spells bare powers of ``x``.  Only a pinned
side may carry exponent 0 (the factor is then the constant ``g(1)``).
"""
from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

from .algebra import as_rational, format_rational
from .errors import InputError


@dataclass(frozen=True)
class Term:
    i: int
    p: int
    q: int
    coef: Fraction = Fraction(1)
    f_pinned: bool = False
    g_pinned: bool = False
    f_name: Optional[str] = None
    g_name: Optional[str] = None

    def __post_init__(self) -> None:
        if self.i < 1:
            raise InputError(f"term index must be positive, got {self.i}")
        if self.p < (0 if self.f_pinned else 1) or self.q < (0 if self.g_pinned else 1):
            raise InputError(f"term {self.i}: exponents must be >= 1 (got p={self.p}, q={self.q})")
        if self.p == 0 and self.q == 0:
            raise InputError(f"term {self.i}: constant term has no unknown function")
        object.__setattr__(self, "coef", as_rational(self.coef))
        if not self.coef:
            raise InputError(f"term {self.i}: zero coefficient")
        if self.f_name is None:
            object.__setattr__(self, "f_name", "x" if self.f_pinned else f"f{self.i}")
        if self.g_name is None:
            object.__setattr__(self, "g_name", "x" if self.g_pinned else f"g{self.i}")

    @property
    def degree(self) -> int:
        return self.p + self.q

    def to_json(self) -> Dict[str, Any]:
        out: Dict[str, Any] = {"i": self.i, "p": self.p, "q": self.q}
        if self.coef != 1:
            out["coef"] = format_rational(self.coef)
        if self.f_pinned:
            out["f_pinned"] = True
        if self.g_pinned:
            out["g_pinned"] = True
        if self.f_name != ("x" if self.f_pinned else f"f{self.i}"):
            out["f_name"] = self.f_name
        if self.g_name != ("x" if self.g_pinned else f"g{self.i}"):
            out["g_name"] = self.g_name
        return out

    @classmethod
    def from_json(cls, obj: Dict[str, Any]) -> "Term":
        try:
            return cls(
                i=int(obj["i"]),
                p=int(obj["p"]),
                q=int(obj["q"]),
                coef=as_rational(obj.get("coef", 1)),
                f_pinned=bool(obj.get("f_pinned", False)),
                g_pinned=bool(obj.get("g_pinned", False)),
                f_name=obj.get("f_name"),
                g_name=obj.get("g_name"),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"malformed term {obj!r}: {exc}") from exc


def make_terms(pairs: Iterable[Tuple[int, int]], **kwargs: Any) -> List[Term]:
    """Terms labelled 1, 2, ... from bare (p, q) pairs."""
    return [Term(i, p, q, **kwargs) for i, (p, q) in enumerate(pairs, start=1)]


@dataclass(frozen=True)
class EquationSpec:
    """A nonempty list of terms, kept sorted by ``p`` (ties broken by label)."""

    terms: Tuple[Term, ...]

    def __post_init__(self) -> None:
        if not self.terms:
            raise InputError("an equation needs at least one term")
        labels = [t.i for t in self.terms]
        if len(set(labels)) != len(labels):
            raise InputError(f"duplicate term labels: {labels}")
        object.__setattr__(self, "terms", tuple(sorted(self.terms, key=lambda t: (t.p, t.i))))

    @classmethod
    def from_pairs(cls, pairs: Iterable[Tuple[int, int]], **kwargs: Any) -> "EquationSpec":
        return cls(tuple(make_terms(pairs, **kwargs)))

    @property
    def n(self) -> int:
        return len(self.terms)

    @property
    def N(self) -> Optional[int]:
        degrees = {t.degree for t in self.terms}
        return degrees.pop() if len(degrees) == 1 else None

    @property
    def pairs(self) -> List[Tuple[int, int]]:
        return [(t.p, t.q) for t in self.terms]

    def term(self, i: int) -> Term:
        for t in self.terms:
            if t.i == i:
                return t
        raise InputError(f"no term labelled {i}")

    def by_label(self) -> List[Term]:
        return sorted(self.terms, key=lambda t: t.i)

    def to_json(self) -> Dict[str, Any]:
        return {"terms": [t.to_json() for t in self.by_label()]}

    @classmethod
    def from_json(cls, obj: Dict[str, Any]) -> "EquationSpec":
        if not isinstance(obj, dict) or not isinstance(obj.get("terms"), list):
            raise InputError('equation JSON must look like {"terms": [...]}')
        return cls(tuple(Term.from_json(t) for t in obj["terms"]))


@dataclass(frozen=True)
class Check:
    passed: bool
    witness: Any = None


@dataclass(frozen=True)
class ConditionReport:
    """Outcome of C(i) distinct p's, C(ii) common degree, C(iii) p_i != q_j.

    Witnesses use term labels: c1 gives the first two labels sharing a p,
    c2 lists the distinct sums found, c3 gives the first (i, j) with p_i = q_j.
    """

    c1: Check
    c2: Check
    c3: Check

    @property
    def all_passed(self) -> bool:
        return self.c1.passed and self.c2.passed and self.c3.passed

    def to_json(self) -> Dict[str, Any]:
        return {
            "c1": {"passed": self.c1.passed, "witness": list(self.c1.witness) if self.c1.witness else None},
            "c2": {"passed": self.c2.passed, "sums": list(self.c2.witness)},
            "c3": {"passed": self.c3.passed, "witness": list(self.c3.witness) if self.c3.witness else None},
        }


def check_conditions(spec: EquationSpec) -> ConditionReport:
    by_label = spec.by_label()

    c1 = Check(True)
    seen: Dict[int, int] = {}
    for t in by_label:
        if t.p in seen:
            c1 = Check(False, (seen[t.p], t.i))
            break
        seen[t.p] = t.i

    sums = sorted({t.degree for t in spec.terms})
    c2 = Check(len(sums) == 1, tuple(sums))

    c3 = Check(True)
    for a in by_label:
        hit = next((b for b in by_label if a.p == b.q), None)
        if hit is not None:
            c3 = Check(False, (a.i, hit.i))
            break
    return ConditionReport(c1, c2, c3)


def homogenize(terms: Sequence[Term] | EquationSpec) -> List[EquationSpec]:
    """Split terms into groups of equal degree ``p + q``.

    Groups come out in order of first appearance (by label); each group keeps
    the original term labels.
    """
    if isinstance(terms, EquationSpec):
        terms = terms.by_label()
    if not terms:
        raise InputError("nothing to homogenize")
    groups: Dict[int, List[Term]] = {}
    for t in terms:
        groups.setdefault(t.degree, []).append(t)
    return [EquationSpec(tuple(group)) for group in groups.values()]


def relabel(spec: EquationSpec) -> EquationSpec:
    """Renumber labels 1..n following the current label order."""
    terms = []
    for new, t in enumerate(spec.by_label(), start=1):
        f_name = t.f_name if t.f_name != f"f{t.i}" else None
        g_name = t.g_name if t.g_name != f"g{t.i}" else None
        terms.append(replace(t, i=new, f_name=f_name, g_name=g_name))
    return EquationSpec(tuple(terms))
