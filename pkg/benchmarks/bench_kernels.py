"""Benchmark the batched MMD kernel: numba JIT vs pure-numpy fallback.

Usage: python benchmarks/bench_kernels.py [--repeats N]

The workload mirrors the planner's inner loop: one squared-MMD evaluation
per control candidate over a shared violation matrix. Threads can be capped
with MMDNAV_THREADS; MMDNAV_PURE_NUMPY is not needed here because both code
paths are called explicitly.
"""

import argparse
import time

import numpy as np

from mmdnav._accel import USING_NUMBA, _mmd_costs_numpy, mmd_costs


def bench(fn, H, a, gamma, repeats):
    fn(H, a, gamma)  # warm-up (JIT compile / cache touch)
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn(H, a, gamma)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeats", type=int, default=5)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    cases = [
        (121, 120),    # Monte-Carlo benchmark shape
        (121, 245),
        (625, 500),    # full-resolution planner shape
        (625, 1000),
    ]
    print(f"numba available: {USING_NUMBA}")
    print(f"{'candidates':>10} {'pairs':>6} {'numpy (ms)':>11} "
          f"{'numba (ms)':>11} {'speedup':>8}")
    for n_ctrl, n_pairs in cases:
        H = np.maximum(rng.normal(0.1, 0.3, (n_ctrl, n_pairs)), 0.0)
        a = np.full(n_pairs, 1.0 / n_pairs)
        t_np = bench(_mmd_costs_numpy, H, a, 50.0, args.repeats)
        row = f"{n_ctrl:>10} {n_pairs:>6} {t_np * 1e3:>11.2f} "
        if USING_NUMBA:
            t_nb = bench(mmd_costs, H, a, 50.0, args.repeats)
            row += f"{t_nb * 1e3:>11.2f} {t_np / t_nb:>8.1f}x"
            assert np.allclose(mmd_costs(H, a, 50.0),
                               _mmd_costs_numpy(H, a, 50.0), atol=1e-10)
        else:
            row += f"{'-':>11} {'-':>8}"
        print(row)


if __name__ == "__main__":
    main()
