"""Time the PQCM frontier optimizer: compiled kernel vs numpy fallback.

    python3 benchmarks/bench_kernels.py [--d 10] [--n 4001] [--repeat 5]
"""
import argparse
import time

import numpy as np

from qficlone import _fallback

try:
    from qficlone import _kernels
except ImportError:
    _kernels = None


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--d", type=int, default=10)
    ap.add_argument("--n", type=int, default=4001)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    eta_a = np.linspace(0.0, 1.0, args.n)
    t_np, (eb_np, _) = best_of(lambda: _fallback.pqcm_frontier(eta_a, args.d), args.repeat)
    print(f"numpy   d={args.d} n={args.n}: {t_np * 1e3:8.1f} ms")
    if _kernels is None:
        print("cython  extension not built (reinstall without QFICLONE_NO_EXT)")
        return
    t_cy, (eb_cy, _) = best_of(lambda: _kernels.pqcm_frontier(eta_a, args.d), args.repeat)
    print(f"cython  d={args.d} n={args.n}: {t_cy * 1e3:8.1f} ms")
    print(f"speedup {t_np / t_cy:.1f}x, max |diff| {np.max(np.abs(eb_np - eb_cy)):.1e}")


if __name__ == "__main__":
    main()
