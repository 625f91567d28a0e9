#!/usr/bin/env python3
"""Benchmark the compiled DP kernels against the pure-Python fallback.

Usage: python benchmarks/bench_kernels.py [--lengths 100,300,1000] [--repeats 5]

Both backends are exact, so the comparison is purely about speed; results on
every pair are asserted equal while timing.
"""

from __future__ import annotations

import argparse
import random
import time
from array import array

from gazemap.kernels import _pure

try:
    from gazemap.kernels import _dp as compiled
except ImportError:
    compiled = None


def make_pairs(rng: random.Random, length: int, count: int, alphabet: int = 8):
    return [
        (
            [rng.randrange(alphabet) for _ in range(length)],
            [rng.randrange(alphabet) for _ in range(length)],
        )
        for _ in range(count)
    ]


def bench(fn, pairs, convert):
    start = time.perf_counter()
    results = [fn(convert(a), convert(b)) for a, b in pairs]
    return time.perf_counter() - start, results


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--lengths", default="100,300,1000")
    parser.add_argument("--repeats", type=int, default=5, help="pairs per length")
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    if compiled is None:
        print("compiled extension not available; showing pure-Python timings only")

    rng = random.Random(args.seed)
    lengths = [int(v) for v in args.lengths.split(",")]

    header = f"{'kernel':<12}{'length':>8}{'pure (s)':>12}{'compiled (s)':>14}{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for name, pure_fn, compiled_fn in (
        ("dtw_unit", _pure.dtw_unit, getattr(compiled, "dtw_unit", None)),
        ("lcs_length", _pure.lcs_length, getattr(compiled, "lcs_length", None)),
    ):
        for length in lengths:
            pairs = make_pairs(rng, length, args.repeats)
            t_pure, r_pure = bench(pure_fn, pairs, list)
            if compiled_fn is not None:
                t_comp, r_comp = bench(compiled_fn, pairs, lambda s: array("i", s))
                assert r_pure == r_comp, "backends disagree"
                print(
                    f"{name:<12}{length:>8}{t_pure:>12.4f}{t_comp:>14.4f}"
                    f"{t_pure / t_comp:>9.1f}x"
                )
            else:
                print(f"{name:<12}{length:>8}{t_pure:>12.4f}{'-':>14}{'-':>10}")


if __name__ == "__main__":
    main()
