"""Benchmark the subset-scan kernels: compiled extension vs numpy fallback.

Times the full per-node candidate scan for a few (p, s, B) shapes.  The
scan works on precomputed Gram matrices, so its cost is independent of
the block length; a token L is used to build the inputs.

Usage: python benchmarks/bench_scan.py [--repeat R]
"""

import argparse
import time

import numpy as np

from nsgms import _scan_py
from nsgms.kernels import scan_backend, subset_objectives
from nsgms.regression import candidate_sets
from nsgms.sampling import SampleBlocks, block_grams

SHAPES = (
    # (p, s, B)
    (8, 2, 4),
    (12, 3, 4),
    (16, 3, 8),
    (20, 4, 4),
)


def build_inputs(p, s, B, L=64, seed=0):
    rng = np.random.default_rng(seed)
    samples = SampleBlocks(p=p, B=B, L=L,
                           data=tuple(rng.standard_normal((p, L)) for _ in range(B)))
    grams = np.ascontiguousarray(block_grams(samples))
    sets = list(candidate_sets(p, 1, s))
    subsets = np.full((len(sets), max(s, 1)), -1, dtype=np.int32)
    sizes = np.empty(len(sets), dtype=np.int32)
    for k, T in enumerate(sets):
        sizes[k] = len(T)
        subsets[k, : len(T)] = [j - 1 for j in T]
    return grams, subsets, sizes, samples.n_samples


def time_fn(fn, args, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5, help="timing repetitions, best-of")
    opts = parser.parse_args()

    print(f"active backend: {scan_backend()}")
    header = f"{'p':>4} {'s':>3} {'B':>3} {'sets':>7} {'fast':>10} {'python':>10} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for (p, s, B) in SHAPES:
        grams, subsets, sizes, n = build_inputs(p, s, B)
        args = (grams, 0, subsets, sizes, n, 0.05, 1e-10)
        fast = subset_objectives(*args)
        slow = _scan_py.subset_objectives(*args)
        assert np.allclose(fast, slow, rtol=1e-10), "backends disagree"
        t_fast = time_fn(subset_objectives, args, opts.repeat)
        t_slow = time_fn(_scan_py.subset_objectives, args, opts.repeat)
        print(f"{p:>4} {s:>3} {B:>3} {len(sizes):>7} "
              f"{t_fast * 1e3:>8.2f}ms {t_slow * 1e3:>8.2f}ms {t_slow / t_fast:>7.1f}x")


if __name__ == "__main__":
    main()
