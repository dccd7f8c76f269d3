"""JSON reports for the command-line front end.

Every builder returns plain dicts whose key order is fixed by construction,
so ``json.dumps`` of the same inputs is byte-identical across runs.  Wall
clock timing is opt-in for that reason.
"""
from __future__ import annotations

import time
from fractions import Fraction
from typing import Any, Dict, List, Mapping, Optional, Tuple

from . import __version__
from .algebra import format_coefficient
from .ansatz import coeffs_to_json, direct_residual
from .config import EngineConfig
from .diffield import DiffOperator, FieldDerivation, oracle_residuals, residual, sample_points
from .dsl import print_equation
from .equation import EquationSpec, check_conditions, homogenize
from .errors import InputError, InvariantError
from .leibniz import expand_power, expand_product
from .orderbound import Infeasible, Undetermined, WitnessFound, max_order_scan, verify_certificate

Coeffs = Dict[Tuple[int, int], Fraction]

FIELD_NOTE = (
    "all coefficients are rational; the constraint systems have integer entries, "
    "so solving over Q loses nothing"
)


def _header(command: str) -> Dict[str, Any]:
    return {"tool": "derivorder", "version": __version__, "command": command}


def _echo(spec: EquationSpec) -> Dict[str, Any]:
    return {"text": print_equation(spec), "equation": spec.to_json()}


def _component(index: int, spec: EquationSpec) -> Dict[str, Any]:
    return {
        "index": index,
        "N": spec.N,
        "n": spec.n,
        "text": print_equation(spec),
        "equation": spec.to_json(),
    }


def _refusal(spec: EquationSpec) -> Optional[str]:
    cond = check_conditions(spec)
    reasons = []
    if not cond.c1.passed:
        reasons.append(f"C(i) fails at terms {list(cond.c1.witness)}: equal p admits arbitrary additive solutions")
    if not cond.c3.passed:
        reasons.append(f"C(iii) fails at (i, j) = {tuple(cond.c3.witness)}: bounds are only certified under p_i != q_j")
    return "; ".join(reasons) or None


def _select(components: List[EquationSpec], which: Optional[int]) -> List[Tuple[int, EquationSpec]]:
    indexed = list(enumerate(components, start=1))
    if which is None:
        return indexed
    if not 1 <= which <= len(indexed):
        raise InputError(f"component {which} out of range 1..{len(indexed)}")
    return [indexed[which - 1]]


def homogenize_report(spec: EquationSpec, component: Optional[int] = None) -> Dict[str, Any]:
    parts = homogenize(spec)
    return {
        **_header("homogenize"),
        "input": _echo(spec),
        "conditions": check_conditions(spec).to_json(),
        "components": [_component(i, c) for i, c in _select(parts, component)],
    }


def _analyze_component(
    index: int,
    spec: EquationSpec,
    max_order: Optional[int],
    seed: int,
    points: int,
    m: int,
    config: EngineConfig,
) -> Dict[str, Any]:
    out = _component(index, spec)
    out["conditions"] = check_conditions(spec).to_json()
    refusal = _refusal(spec)
    if refusal:
        out["status"] = "refused"
        out["reason"] = refusal
        return out
    order = 2 * spec.n if max_order is None else max_order
    scan = max_order_scan(spec, order, order, oracle_points=points, oracle_vars=m, seed=seed, config=config)
    certificates = 0
    for (k, l), verdict in sorted(scan.grid.items()):
        if isinstance(verdict, Infeasible):
            if not verify_certificate(spec, k, l, verdict, config):
                raise InvariantError(f"certificate at (k, l) = ({k}, {l}) failed to re-verify")
            certificates += 1
    witnesses = [v for v in scan.grid.values() if isinstance(v, WitnessFound)]
    undetermined = [v for v in scan.grid.values() if isinstance(v, Undetermined)]
    out["status"] = "analyzed"
    out["max_order"] = order
    out["scan"] = scan.to_json()
    out["certificates_verified"] = certificates
    out["oracle"] = {
        "points": points,
        "vars": m,
        "point_degree": 1,
        "seed": seed,
        "witnesses_checked": len(witnesses) if points else 0,
        "disagreements": len(undetermined),
    }
    return out


def analyze_report(
    spec: EquationSpec,
    *,
    max_order: Optional[int] = None,
    seed: int = 0,
    points: int = 3,
    m: int = 2,
    component: Optional[int] = None,
    config: Optional[EngineConfig] = None,
    timing: bool = False,
) -> Dict[str, Any]:
    """Conditions, homogenization, then a verified order scan per component."""
    config = config or EngineConfig()
    start = time.perf_counter()
    parts = homogenize(spec)
    report = {
        **_header("analyze"),
        "input": _echo(spec),
        "settings": {"max_order": max_order, "seed": seed, "points": points, "vars": m},
        "conditions": check_conditions(spec).to_json(),
        "components": [
            _analyze_component(i, c, max_order, seed, points, m, config)
            for i, c in _select(parts, component)
        ],
        "notes": [FIELD_NOTE],
    }
    if timing:
        report["timing"] = {"seconds": round(time.perf_counter() - start, 3)}
    return report


def expand_report(k: int, p: int, product: bool = False, config: Optional[EngineConfig] = None) -> Dict[str, Any]:
    out = {**_header("expand"), "k": k, "p": p}
    if product:
        exp = expand_product(k, p, config)
        out["product"] = [
            {"orders": list(ls), "c": format_coefficient(c)}
            for ls, c in sorted(exp.terms.items(), reverse=True)
        ]
        return out
    poly = expand_power(k, p, config)
    out["expansion"] = poly.render()
    out["terms"] = [{"monomial": m.render(), "c": format_coefficient(c)} for m, c in poly.sorted_terms()]
    return out


def _with_pins(spec: EquationSpec, lam: Coeffs, mu: Coeffs) -> Tuple[Coeffs, Coeffs]:
    """Pinned sides without entries act as the identity."""
    lam, mu = dict(lam), dict(mu)
    for t in spec.terms:
        if t.f_pinned and not any(i == t.i for i, _ in lam):
            lam[(t.i, 0)] = Fraction(1)
        if t.g_pinned and not any(i == t.i for i, _ in mu):
            mu[(t.i, 0)] = Fraction(1)
    return lam, mu


def verify_report(
    spec: EquationSpec,
    lam: Coeffs,
    mu: Coeffs,
    *,
    seed: int = 0,
    points: int = 3,
    m: int = 2,
    config: Optional[EngineConfig] = None,
) -> Dict[str, Any]:
    """Symbolic residual plus oracle residuals for ``f_i = sum lam d^j``, ``g_i = sum mu d^j``."""
    lam, mu = _with_pins(spec, lam, mu)
    symbolic = direct_residual(spec, lam, mu, config)
    derivation = FieldDerivation.euler(m)
    xs = sample_points(points, m, seed, max_degree=1)
    values = oracle_residuals(spec, lam, mu, xs, derivation)
    return {
        **_header("verify"),
        "input": _echo(spec),
        "lambda": coeffs_to_json(lam),
        "mu": coeffs_to_json(mu),
        "symbolic_residual": symbolic.render(),
        "oracle": {
            "vars": m,
            "seed": seed,
            "derivation": derivation.render(),
            "points": [x.render() for x in xs],
            "residuals": [r.render() for r in values],
        },
        "verified": not symbolic and not any(values),
    }


def _operators_by_name(spec: EquationSpec, ops: Mapping[str, DiffOperator]) -> Tuple[List[DiffOperator], List[DiffOperator]]:
    f_ops, g_ops = [], []
    for t in spec.terms:
        for side, name, pinned, acc in (("f", t.f_name, t.f_pinned, f_ops), ("g", t.g_name, t.g_pinned, g_ops)):
            if name in ops:
                acc.append(ops[name])
            elif pinned:
                acc.append(DiffOperator.identity())
            else:
                raise InputError(f"no operator given for {name} (term {t.i}, {side} side)")
    return f_ops, g_ops


def oracle_report(
    spec: EquationSpec,
    ops: Mapping[str, DiffOperator],
    *,
    seed: int = 0,
    points: int = 3,
    m: int = 2,
) -> Dict[str, Any]:
    """Evaluate the equation for named operators at seeded points of Q(t1..tm)."""
    f_ops, g_ops = _operators_by_name(spec, ops)
    xs = sample_points(points, m, seed)
    values = [residual(spec, f_ops, g_ops, x) for x in xs]
    return {
        **_header("oracle"),
        "input": _echo(spec),
        "operators": {name: ops[name].to_json() for name in sorted(ops)},
        "vars": m,
        "seed": seed,
        "points": [x.render() for x in xs],
        "residuals": [r.render() for r in values],
        "all_zero": not any(values),
    }


# -- text rendering ------------------------------------------------------------


def _verdict_char(cell: Mapping[str, Any]) -> str:
    return {"infeasible": ".", "witness": "W", "undetermined": "?"}[cell["verdict"]]


def _conditions_line(cond: Mapping[str, Any]) -> str:
    return " ".join(
        f"{name}={'pass' if cond[key]['passed'] else 'FAIL'}"
        for name, key in (("C(i)", "c1"), ("C(ii)", "c2"), ("C(iii)", "c3"))
    )


def render_text(report: Mapping[str, Any]) -> str:
    lines: List[str] = []
    cmd = report["command"]
    if "input" in report:
        lines.append(f"equation: {report['input']['text']}")
    if "conditions" in report:
        lines.append(f"conditions: {_conditions_line(report['conditions'])}")
    if cmd == "expand":
        if "expansion" in report:
            lines.append(f"d^{report['k']}(x^{report['p']}) = {report['expansion']}")
        else:
            for item in report["product"]:
                lines.append(f"{item['c']} * {tuple(item['orders'])}")
    for comp in report.get("components", []):
        lines.append(f"component {comp['index']}: N={comp['N']} n={comp['n']}  {comp['text']}")
        if cmd != "analyze":
            continue
        if comp["status"] == "refused":
            lines.append(f"  refused: {comp['reason']}")
            continue
        scan = comp["scan"]
        lines.append(f"  grid (rows k = 0..{scan['k_max']}, columns l = 0..{scan['l_max']}; . infeasible, W witness)")
        cells = {(c["k"], c["l"]): c for c in scan["grid"]}
        for k in range(scan["k_max"] + 1):
            lines.append("    " + " ".join(_verdict_char(cells[(k, l)]) for l in range(scan["l_max"] + 1)))
        lines.append(f"  bound_k={scan['bound_k']} bound_l={scan['bound_l']} certified_bound={scan['certified_bound']}")
        lines.append(f"  certificates re-verified: {comp['certificates_verified']}")
        o = comp["oracle"]
        lines.append(f"  oracle: {o['witnesses_checked']} witnesses at {o['points']} points, {o['disagreements']} disagreements")
    if cmd == "verify":
        lines.append(f"symbolic residual: {report['symbolic_residual']}")
        for x, r in zip(report["oracle"]["points"], report["oracle"]["residuals"]):
            lines.append(f"  x = {x}: residual {r}")
        lines.append("verified" if report["verified"] else "NOT verified")
    if cmd == "oracle":
        for x, r in zip(report["points"], report["residuals"]):
            lines.append(f"  x = {x}: residual {r}")
        lines.append("all residuals zero" if report["all_zero"] else "nonzero residual")
    for note in report.get("notes", []):
        lines.append(f"note: {note}")
    if "timing" in report:
        lines.append(f"time: {report['timing']['seconds']} s")
    return "\n".join(lines)
