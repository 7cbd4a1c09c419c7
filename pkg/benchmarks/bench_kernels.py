"""Compare the numba kernels against the pure-Python/numpy fallback.

The fallback is the same function body interpreted; BBS_NUMBA=0 selects it
package-wide, this script times both in one process.

Usage: python benchmarks/bench_kernels.py [--window 256] [--reps 2000]
"""

import argparse
import time

import numpy as np

from boxball import _kernels as K


def timeit(fn, args, reps):
    fn(*args)  # warm (jit compile on the fast path)
    best = float("inf")
    for _ in range(5):
        t0 = time.perf_counter()
        for _ in range(reps):
            fn(*args)
        best = min(best, (time.perf_counter() - t0) / reps)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--window", type=int, default=256)
    ap.add_argument("--reps", type=int, default=2000)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    caps = rng.integers(1, 6, size=args.window).astype(np.int64)
    counts = rng.integers(0, caps + 1).astype(np.int64)
    total = int(counts.sum())
    bits = K.expand_sweep_py(counts, caps, int(caps.sum()))
    starts, lengths = K.run_scan_py(bits)
    bounds = np.concatenate([[0], np.cumsum(caps)])

    pairs = [
        ("carrier_sweep", K.carrier_sweep, K.carrier_sweep_py, (counts, caps, 7, True)),
        (
            "ball_queue_sweep",
            K.ball_queue_sweep,
            K.ball_queue_sweep_py,
            (counts, caps, 7, True, total),
        ),
        ("free_flow_sweep", K.free_flow_sweep, K.free_flow_sweep_py, (counts, caps)),
        (
            "expand_sweep",
            K.expand_sweep,
            K.expand_sweep_py,
            (counts, caps, int(caps.sum())),
        ),
        ("run_scan", K.run_scan, K.run_scan_py, (bits,)),
        (
            "counts_from_runs",
            K.counts_from_runs,
            K.counts_from_runs_py,
            (starts, lengths, bounds),
        ),
    ]

    print(f"numba enabled: {K.NUMBA_ENABLED}   window={args.window}  reps={args.reps}")
    print(f"{'kernel':<20}{'jit us':>10}{'python us':>12}{'speedup':>9}")
    for name, fast, slow, a in pairs:
        t_fast = timeit(fast, a, args.reps) * 1e6
        t_slow = timeit(slow, a, max(args.reps // 20, 10)) * 1e6
        ratio = t_slow / t_fast if t_fast > 0 else float("inf")
        print(f"{name:<20}{t_fast:>10.2f}{t_slow:>12.2f}{ratio:>8.1f}x")


if __name__ == "__main__":
    main()
