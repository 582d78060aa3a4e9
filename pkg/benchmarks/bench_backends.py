"""Time the compiled kernels against the NumPy fallback.

    python benchmarks/bench_backends.py [--repeats 5] [--threads 1]

Prints one row per (kernel, n, N, p) with the best wall time per backend,
the speedup, and the largest relative disagreement between the two.
"""

import argparse
import time

import numpy as np

from supportpoints import _backend

SIZES = [(50, 10_000, 2), (200, 10_000, 2), (800, 10_000, 2), (200, 10_000, 5), (200, 10_000, 50)]


def best_time(fn, repeats):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def rel_diff(a, b):
    if isinstance(a, dict):
        return max(rel_diff(a[k], b[k]) for k in a)
    a, b = np.asarray(a, float), np.asarray(b, float)
    finite = np.isfinite(a)
    scale = np.maximum(np.abs(a[finite]), 1e-300)
    return float((np.abs(a[finite] - b[finite]) / scale).max(initial=0.0))


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeats", type=int, default=5)
    ap.add_argument("--threads", type=int, default=1)
    args = ap.parse_args()
    names = _backend.available_backends()
    if "cython" not in names:
        print("compiled kernels not built; only the fallback is available")
    kernels = {
        "cross_row_sums": lambda x, y, b: _backend.cross_row_sums(x, y, args.threads, b),
        "sweep": lambda x, y, b: _backend.sweep(x, y, 1e-12, args.threads, b),
    }
    print(f"{'kernel':<15}{'n':>6}{'N':>7}{'p':>4}" + "".join(f"{b + ' s':>12}" for b in names)
          + f"{'speedup':>9}{'max rel diff':>14}")
    rng = np.random.default_rng(0)
    for kname, fn in kernels.items():
        for n, big_n, p in SIZES:
            x, y = rng.normal(size=(n, p)), rng.normal(size=(big_n, p))
            res = {b: best_time(lambda b=b: fn(x, y, b), args.repeats) for b in names}
            row = f"{kname:<15}{n:>6}{big_n:>7}{p:>4}" + "".join(f"{res[b][0]:>12.4f}" for b in names)
            if len(names) == 2:
                row += f"{res['numpy'][0] / res['cython'][0]:>9.2f}"
                row += f"{rel_diff(res['cython'][1], res['numpy'][1]):>14.2e}"
            print(row)


if __name__ == "__main__":
    main()
