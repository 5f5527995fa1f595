#!/usr/bin/env python3
"""Compare the compiled and pure-Python kernels on the hot loops.

Usage: python benchmarks/bench_kernels.py [--walk-max 1000000] [--reps 3]

Times the prefix-power walk, the discrete tracking loop, and the RK4
integrator at a few sizes on both backends and prints the speedups.  Both
backends produce bit-identical output (asserted here as a side check).
"""

import argparse
import time

import numpy as np

from tbpwalk import _kernels_py as pyk

try:
    from tbpwalk import _kernels as ck
except ImportError:
    ck = None


def best_time(fn, reps):
    times = []
    for _ in range(reps):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def row(label, n, t_py, t_c):
    speed = f"{t_py / t_c:7.1f}x" if t_c else "      -"
    c_txt = f"{t_c * 1000:10.2f}" if t_c else "         -"
    print(f"{label:<12} {n:>9}  {t_py * 1000:10.2f} {c_txt} {speed}")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--walk-max", type=int, default=1_000_000,
                    help="largest walk length to time (default 1e6)")
    ap.add_argument("--reps", type=int, default=3,
                    help="repetitions per measurement, best is kept")
    args = ap.parse_args()

    if ck is None:
        print("note: compiled backend not built, timing pure Python only\n")

    rng = np.random.default_rng(0)
    print(f"{'kernel':<12} {'N':>9}  {'python ms':>10} {'compiled ms':>10} {'speedup':>8}")

    walk_sizes = [n for n in (10_000, 100_000, 1_000_000) if n <= args.walk_max]
    codes = rng.integers(0, 4, size=max(walk_sizes)).astype(np.uint8)
    for n in walk_sizes:
        sub = codes[:n]
        t_py, out_py = best_time(lambda: pyk.walk_prefix_power(sub), args.reps)
        t_c = None
        if ck is not None:
            t_c, out_c = best_time(lambda: ck.walk_prefix_power(sub), args.reps)
            assert np.array_equal(out_py[0], out_c[0])
        row("walk", n, t_py, t_c)

    sig_full = rng.normal(0, 20, size=100_000)
    for n in (10_000, 100_000):
        sig = sig_full[:n]
        t_py, out_py = best_time(
            lambda: pyk.td_fhan(sig, 0.01, 1.0, sig[0], 0.0), args.reps)
        t_c = None
        if ck is not None:
            t_c, out_c = best_time(
                lambda: ck.td_fhan(sig, 0.01, 1.0, sig[0], 0.0), args.reps)
            assert np.array_equal(out_py[0], out_c[0])
        row("td_fhan", n, t_py, t_c)

    sine = np.sin(0.02 * np.arange(2000))
    for nsub in (100, 1000):
        t_py, out_py = best_time(
            lambda: pyk.rk4_track(sine, 10.0, nsub, 0, 0.8, 0.8, sine[0], 0.0),
            args.reps)
        t_c = None
        if ck is not None:
            t_c, out_c = best_time(
                lambda: ck.rk4_track(sine, 10.0, nsub, 0, 0.8, 0.8, sine[0], 0.0),
                args.reps)
            assert np.array_equal(out_py[0], out_c[0])
        row(f"rk4 x{nsub}", 2000, t_py, t_c)


if __name__ == "__main__":
    main()
