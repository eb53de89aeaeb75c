"""Jacobi eigensolver: numba kernel vs pure-numpy fallback (numpy.linalg.eigh as reference).

    python benchmarks/bench_eigh.py [--sizes 4 16 64] [--repeat 5]
"""

import argparse
import time

import numpy as np

from dfswire import _kernels


def random_hermitian(rng, n):
    g = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (g + g.conj().T) / 2


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[4, 16, 64, 128])
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    _kernels.jacobi(np.eye(2), backend="numba")  # compile / load cache

    print(f"{'n':>5} {'numba [s]':>11} {'numpy [s]':>11} {'eigh [s]':>11} {'speedup':>8} {'max |dw|':>9}")
    for n in args.sizes:
        m = random_hermitian(rng, n)
        tol = 1e-12 * max(1.0, np.linalg.norm(m))
        t_jit = best_of(lambda: _kernels.jacobi(m, 100, tol, backend="numba"), args.repeat)
        t_np = best_of(lambda: _kernels.jacobi(m, 100, tol, backend="numpy"), max(1, args.repeat // 2))
        t_ref = best_of(lambda: np.linalg.eigh(m), args.repeat)
        w_jit = np.sort(_kernels.jacobi(m, 100, tol, backend="numba")[0])
        w_np = np.sort(_kernels.jacobi(m, 100, tol, backend="numpy")[0])
        dw = max(np.max(np.abs(w_jit - np.linalg.eigvalsh(m))), np.max(np.abs(w_np - w_jit)))
        print(f"{n:>5} {t_jit:>11.2e} {t_np:>11.2e} {t_ref:>11.2e} {t_np / t_jit:>7.0f}x {dw:>9.1e}")


if __name__ == "__main__":
    main()
