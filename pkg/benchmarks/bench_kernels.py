"""Benchmark the Monte-Carlo sampling kernels: compiled vs pure python.

Usage: python benchmarks/bench_kernels.py [--trials N] [--repeats K]

Prints throughput (trials/second) for each backend over a spread of outcome
counts, verifies that both backends agree bitwise, and reports the speedup.
"""

import argparse
import time

import numpy as np

from qalab.kernels import _mc_py

try:
    from qalab.kernels import _mc_cy
except ImportError:
    _mc_cy = None


def _timed(fn, cw, trials, repeats):
    best = float("inf")
    result = None
    for _ in range(repeats):
        start = time.perf_counter()
        result = fn(cw, 12345, 0xC0FFEE, 0, trials)
        best = min(best, time.perf_counter() - start)
    return best, result


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--trials", type=int, default=2_000_000)
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    print(f"{args.trials:,} trials per call, best of {args.repeats}\n")
    header = f"{'outcomes':>8}  {'python':>12}  {'cython':>12}  {'speedup':>8}"
    print(header)
    print("-" * len(header))
    rng = np.random.default_rng(0)
    for d in (2, 4, 8, 16, 64):
        weights = rng.uniform(0.05, 1.0, size=d)
        cw = np.cumsum(weights)
        cw /= cw[-1]
        t_py, counts_py = _timed(_mc_py.sample_counts, cw, args.trials, args.repeats)
        rate_py = args.trials / t_py
        if _mc_cy is not None:
            t_cy, counts_cy = _timed(_mc_cy.sample_counts, cw, args.trials, args.repeats)
            rate_cy = args.trials / t_cy
            assert (counts_py == counts_cy).all(), "backend results differ"
            print(f"{d:>8}  {rate_py:>10.2e}/s  {rate_cy:>10.2e}/s  {t_py / t_cy:>7.1f}x")
        else:
            print(f"{d:>8}  {rate_py:>10.2e}/s  {'n/a':>12}  {'':>8}")
    if _mc_cy is None:
        print("\ncompiled kernel not built; showing pure-python only")


if __name__ == "__main__":
    main()
