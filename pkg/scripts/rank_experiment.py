"""Ranks of the case matrices and the mixed binomial-product matrix.

The case1/case3 systems should always have full rank n; the mixed matrix is
experimental and its rank deficiencies are only reported.

    python3 scripts/rank_experiment.py --draws 50 --n-max 6 --seed 0
"""
import argparse
import json
from collections import Counter
from dataclasses import dataclass

from derivorder.orderbound import rank_experiment


@dataclass
class RankConfig:
    draws: int = 50
    n_max: int = 6
    seed: int = 0


def summarize(cfg: RankConfig) -> dict:
    records = rank_experiment(cfg.draws, cfg.n_max, cfg.seed)
    full = Counter(r.kind for r in records if r.full)
    total = Counter(r.kind for r in records)
    return {
        "draws": cfg.draws,
        "full_rank": {kind: f"{full[kind]}/{total[kind]}" for kind in sorted(total)},
        "mixed_deficient": [r.to_json() for r in records if r.kind == "mixed" and not r.full],
    }


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--draws", type=int, default=50)
    ap.add_argument("--n-max", type=int, default=6)
    ap.add_argument("--seed", type=int, default=0)
    a = ap.parse_args()
    print(json.dumps(summarize(RankConfig(a.draws, a.n_max, a.seed)), indent=2))


if __name__ == "__main__":
    main()
