"""Compare the numba kernels with the numpy fallback.

Run with ``python3 benchmarks/bench_kernels.py``. The first numba call of
each kernel is excluded from the timings (compilation, or a cache load).
"""

import argparse
import timeit

import numpy as np

from pswfkit import _accel, build_basis, linalg, prolate_grid


def cases(n):
    rng = np.random.default_rng(0)
    A = rng.standard_normal((n, n)) + n * np.eye(n)
    x = np.linspace(-1, 1, n)
    coef = rng.standard_normal(2 * n)
    d, e = rng.standard_normal(n), rng.standard_normal(n - 1)
    return {
        "legendre_table": lambda b: linalg.kernels(b).legendre_table(x, 2 * n, 2),
        "legendre_series": lambda b: linalg.kernels(b).legendre_series(coef, x, 2),
        "tridiag_eig": lambda b: linalg.tridiag_eig(d, e, backend=b),
        "lu_factor": lambda b: linalg.kernels(b).lu_factor(A.copy()),
        "dense_eig": lambda b: linalg.dense_eig(A, backend=b),
        "singular_values": lambda b: linalg.singular_values(A[: n // 2, : n // 2], backend=b),
    }


def time_call(fn, repeat):
    fn()
    return min(timeit.repeat(fn, number=1, repeat=repeat))


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=200)
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not _accel.NUMBA_AVAILABLE:
        raise SystemExit("numba is not installed")
    print(f"{'kernel':18s} {'numba [ms]':>11s} {'numpy [ms]':>11s} {'ratio':>7s}")
    for name, fn in cases(args.n).items():
        t = {b: time_call(lambda b=b: fn(b), args.repeat) * 1e3 for b in ("numba", "numpy")}
        print(f"{name:18s} {t['numba']:11.3f} {t['numpy']:11.3f} {t['numpy'] / t['numba']:7.2f}")

    # end-to-end: basis, grid and interior eigenvalues at c = N/2
    N = args.n
    for b in ("numba", "numpy"):
        _accel.USE_NUMBA = b == "numba"
        t = time_call(lambda: prolate_grid(build_basis(N / 2.0, N)), args.repeat) * 1e3
        print(f"basis+grid N={N} [{b}]: {t:.1f} ms")


if __name__ == "__main__":
    main()
