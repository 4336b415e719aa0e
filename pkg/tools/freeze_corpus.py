"""Regenerate tests/data/oracle_corpus.json: random small instances with reference verdicts.

Verdicts come from the reference decision procedure only; the checker is
never consulted, so the file can be used to test it.
"""

from __future__ import annotations

import argparse
import json
import random
from pathlib import Path

from hypercheck import formula as F
from hypercheck.bench import gen_formula, gen_system
from hypercheck.oracle.explicit import decide_naive
from hypercheck.system import print_system

PATTERNS = ("ae", "ea", "aea", "eae", "a", "e", "aa", "ee", "aae", "eea", "aee", "eaa")


def build(per_pattern: int, seed: int) -> list[dict]:
    rng = random.Random(seed)
    out = []
    for i in range(per_pattern * len(PATTERNS)):
        pattern = PATTERNS[i % len(PATTERNS)]
        t = gen_system(rng.randint(1, 5), rng.choice([0.2, 0.4, 0.6]), 2, rng.randrange(10**6))
        f = gen_formula(pattern, rng.randint(1, 8), 2, rng.randrange(10**6))
        out.append({
            "id": i,
            "pattern": pattern,
            "system": print_system(t),
            "formula": F.print_formula(f),
            "holds": decide_naive(t, f),
        })
    return out


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--per-pattern", type=int, default=30)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--out", default=str(Path(__file__).resolve().parents[1] / "tests/data/oracle_corpus.json"))
    args = ap.parse_args()
    corpus = build(args.per_pattern, args.seed)
    with open(args.out, "w", encoding="utf-8") as fh:
        json.dump({"seed": args.seed, "instances": corpus}, fh, indent=1)
        fh.write("\n")
    print(f"{len(corpus)} instances, {sum(c['holds'] for c in corpus)} hold")


if __name__ == "__main__":
    main()
