"""Compare the compiled and pure-Python kernels on representative inputs.

Usage: python benchmarks/bench_kernels.py [--repeat N]
"""

from __future__ import annotations

import argparse
import random
import timeit

from hypercheck.automata import kernels


def region_inputs(rng, count=200):
    out = []
    for _ in range(count):
        cubes = []
        for _ in range(rng.randint(4, 12)):
            bits = rng.sample(range(12), rng.randint(1, 4))
            pos = neg = 0
            for b in bits:
                if rng.random() < 0.5:
                    pos |= 1 << b
                else:
                    neg |= 1 << b
            cubes.append((pos, neg))
        out.append(cubes)
    return out


def ranking_inputs(rng, count=40):
    out = []
    for _ in range(count):
        k = rng.randint(5, 8)
        final = [rng.random() < 0.3 for _ in range(k)]
        bounds = [rng.randint(1, 5) for _ in range(k)]
        out.append((bounds, final, rng.choice([1, 3, 5])))
    return out


def graph_inputs(rng, count=20, n=2000):
    return [[rng.sample(range(n), 3) for _ in range(n)] for _ in range(count)]


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args(argv)
    rng = random.Random(0)
    cases = {
        "partition_regions": (kernels.partition_regions, [(c,) for c in region_inputs(rng)]),
        "tight_rankings": (kernels.tight_rankings, ranking_inputs(rng)),
        "scc_ids": (kernels.scc_ids, [(g,) for g in graph_inputs(rng)]),
    }
    backends = kernels.available_backends()
    if "cython" not in backends:
        print("compiled kernels not built; timing the Python fallback only")
    print(f"{'kernel':<20}" + "".join(f"{b:>12}" for b in backends) + ("     speedup" if len(backends) > 1 else ""))
    try:
        for name, (fn, inputs) in cases.items():
            times = {}
            results = {}
            for b in backends:
                kernels.use_backend(b)
                results[b] = [fn(*x) for x in inputs]
                times[b] = min(timeit.repeat(lambda: [fn(*x) for x in inputs], number=1, repeat=args.repeat))
            if len(set(map(repr, results.values()))) != 1:
                raise SystemExit(f"{name}: backends disagree")
            line = f"{name:<20}" + "".join(f"{times[b] * 1000:>10.2f}ms" for b in backends)
            if len(backends) > 1:
                line += f"{times['python'] / times['cython']:>11.1f}x"
            print(line)
    finally:
        kernels.use_backend(backends[-1])


if __name__ == "__main__":
    main()
