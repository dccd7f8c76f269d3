"""Check the kappa and alpha constants on sample triples (p, q, N)."""
import argparse
import json

from derivorder.corollaries import alpha_oracle_zero, alpha_report, kappa_symbolic_residual, kappa_value


def triple_report(p: int, q: int, N: int) -> dict:
    kappa = kappa_value(p, q, N)
    alpha = alpha_report(p, q, N)
    return {
        "triple": [p, q, N],
        "kappa": f"{kappa.numerator}/{kappa.denominator}",
        "kappa_solves": not kappa_symbolic_residual(p, q, N, kappa),
        "kappa_one_fails": bool(kappa_symbolic_residual(p, q, N, 1)),
        "alpha": alpha.to_json(),
        "alpha_oracle_zero": all(alpha_oracle_zero(alpha)),
    }


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("triples", nargs="*", default=["1,2,5", "1,3,6", "2,3,7"], help="p,q,N")
    a = ap.parse_args()
    out = [triple_report(*map(int, t.split(","))) for t in a.triples]
    print(json.dumps(out, indent=2))


if __name__ == "__main__":
    main()
