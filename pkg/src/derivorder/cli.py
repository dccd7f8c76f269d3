"""Command-line front end.

Exit codes: 0 success, 1 bad input, 2 a self-check failed.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Any, List, Optional

from .ansatz import coeffs_from_json
from .config import EngineConfig
from .diffield import DiffOperator
from .dsl import parse_spec
from .equation import EquationSpec
from .errors import InputError, InvariantError
from .report import (
    analyze_report,
    expand_report,
    homogenize_report,
    oracle_report,
    render_text,
    verify_report,
)


def load_equation(arg: str) -> EquationSpec:
    """DSL text, or a path to a ``.json`` file holding ``{"terms": [...]}``."""
    if arg.endswith(".json"):
        return EquationSpec.from_json(_load_json(arg))
    path = Path(arg)
    if path.suffix in (".eq", ".txt") and path.is_file():
        return parse_spec(path.read_text())
    return parse_spec(arg)


def _load_json(arg: str) -> Any:
    path = Path(arg)
    try:
        text = path.read_text() if path.is_file() else arg
        return json.loads(text)
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read JSON from {arg!r}: {exc}") from exc


def _nonneg(value: str) -> int:
    n = int(value)
    if n < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return n


def _positive(value: str) -> int:
    n = int(value)
    if n < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return n


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="seed for oracle sample points")
    common.add_argument("--vars", type=_positive, default=2, metavar="M", help="oracle variables t1..tM (default 2)")
    common.add_argument("--points", type=_nonneg, default=3, help="oracle sample points (default 3)")
    fmt = common.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json", help="JSON output (default)")
    fmt.add_argument("--text", dest="fmt", action="store_const", const="text", help="human-readable output")
    common.set_defaults(fmt="json")

    parser = argparse.ArgumentParser(
        prog="derivorder",
        description="Derivation solutions of sum f_i(x^p_i) g_i(x^q_i) = 0.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("homogenize", parents=[common], help="split into equal-degree components")
    p.add_argument("equation", help="DSL text or a .json file")
    p.add_argument("--component", type=_positive)

    p = sub.add_parser("analyze", parents=[common], help="conditions, components and order scans")
    p.add_argument("equation")
    p.add_argument("--max-order", type=_nonneg, metavar="K", help="scan orders 0..K (default 2n)")
    p.add_argument("--component", type=_positive)
    p.add_argument("--timing", action="store_true", help="add wall-clock time (breaks byte-identical output)")

    p = sub.add_parser("expand", parents=[common], help="expand d^k(x^p) or d^k(x_1...x_p)")
    p.add_argument("--k", type=_nonneg, required=True)
    p.add_argument("--p", type=_nonneg, required=True)
    p.add_argument("--product", action="store_true", help="expand the product of p distinct factors")

    p = sub.add_parser("verify", parents=[common], help="check concrete coefficients symbolically and on the oracle")
    p.add_argument("equation")
    p.add_argument("--coeffs", required=True, help='JSON (or file): {"lambda": [{"i","j","c"}...], "mu": [...]}')

    p = sub.add_parser("oracle", parents=[common], help="evaluate the equation for given differential operators")
    p.add_argument("equation")
    p.add_argument("--ops", required=True, help='JSON (or file) keyed by function name: {"f1": {"terms": [{"c": 1, "comp": [1]}]}, ...}')
    return parser


def run(args: argparse.Namespace) -> dict:
    config = EngineConfig()
    if args.command == "expand":
        return expand_report(args.k, args.p, product=args.product, config=config)
    spec = load_equation(args.equation)
    if args.command == "homogenize":
        return homogenize_report(spec, args.component)
    if args.command == "analyze":
        return analyze_report(
            spec,
            max_order=args.max_order,
            seed=args.seed,
            points=args.points,
            m=args.vars,
            component=args.component,
            config=config,
            timing=args.timing,
        )
    if args.command == "verify":
        data = _load_json(args.coeffs)
        if not isinstance(data, dict):
            raise InputError('coefficients must be {"lambda": [...], "mu": [...]}')
        lam = coeffs_from_json(data.get("lambda", []))
        mu = coeffs_from_json(data.get("mu", []))
        return verify_report(spec, lam, mu, seed=args.seed, points=args.points, m=args.vars, config=config)
    data = _load_json(args.ops)
    if not isinstance(data, dict):
        raise InputError("operators must be a JSON object keyed by function name")
    ops = {name: DiffOperator.from_json(obj) for name, obj in data.items()}
    return oracle_report(spec, ops, seed=args.seed, points=args.points, m=args.vars)


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 1
    try:
        report = run(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except InvariantError as exc:
        print(f"internal check failed: {exc}", file=sys.stderr)
        return 2
    if args.fmt == "text":
        print(render_text(report))
    else:
        print(json.dumps(report, indent=2))
    return 0
