"""Benchmark the compiled Jacobi kernel against the pure-Python fallback.

Usage: python benchmarks/bench_backends.py [--sizes 32,64,128] [--reps 3]

Times full SVDs (QR preconditioning + Jacobi sweeps) of square gaussian
matrices through each backend and prints a per-size comparison table.
"""

import argparse
import statistics
import time

import numpy as np

from specdescent import _jacobi_py, backend, spectral
from specdescent.randmat import Seed, gaussian_matrix

try:
    from specdescent import _jacobi
    KERNELS = [("compiled", _jacobi.jacobi_sweeps), ("python", _jacobi_py.jacobi_sweeps)]
except ImportError:
    KERNELS = [("python", _jacobi_py.jacobi_sweeps)]


def time_svd(kernel, A, reps):
    original = backend.jacobi_sweeps
    backend.jacobi_sweeps = kernel
    try:
        samples = []
        for _ in range(reps):
            start = time.perf_counter()
            dec = spectral.svd(A)
            samples.append(time.perf_counter() - start)
        return statistics.median(samples), float(dec.singular_values[0])
    finally:
        backend.jacobi_sweeps = original


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="32,64,128",
                        help="comma-separated square sizes")
    parser.add_argument("--reps", type=int, default=3)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    print(f"{'size':>6}  " + "".join(f"{name + ' (ms)':>16}" for name, _ in KERNELS)
          + ("  speedup" if len(KERNELS) == 2 else ""))
    for n in sizes:
        A = gaussian_matrix(n, n, Seed(n))
        row = [f"{n:>6}"]
        times = []
        top = None
        for name, kernel in KERNELS:
            t, smax = time_svd(kernel, A, args.reps)
            if top is not None and not np.isclose(top, smax, rtol=1e-10):
                raise SystemExit(f"backend disagreement at n={n}")
            top = smax
            times.append(t)
            row.append(f"{t * 1e3:>16.2f}")
        if len(times) == 2:
            row.append(f"  {times[1] / times[0]:>6.1f}x")
        print("".join(row))


if __name__ == "__main__":
    main()
