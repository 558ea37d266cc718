"""Time the compiled Jacobi kernel against the numpy fallback.

    python benchmarks/bench_kernels.py [--dims 2 4 8 16 32 64] [--repeat 5]

Prints the best-of-N wall time per call for each backend and the speedup.
"""
import argparse
import timeit

import numpy as np

from urlab import _jacobi_py
from urlab.hilbert import JACOBI_MAX_SWEEPS, JACOBI_REL_TOL, random_hermitian

try:
    from urlab import _jacobi_ext
except ImportError:
    _jacobi_ext = None


def _timer(fn, m):
    tol = JACOBI_REL_TOL * np.linalg.norm(m)

    def call():
        fn(m.copy(), np.eye(m.shape[0], dtype=complex), tol, JACOBI_MAX_SWEEPS)

    return call


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--dims", type=int, nargs="+", default=[2, 4, 8, 16, 32, 64])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()

    backends = {"python": _jacobi_py.jacobi_sweeps}
    if _jacobi_ext is not None:
        backends["cython"] = _jacobi_ext.jacobi_sweeps
    else:
        print("compiled kernel not built; timing the fallback only")

    print(f"{'dim':>5} " + " ".join(f"{name + ' (ms)':>14}" for name in backends) + f" {'speedup':>9}")
    for dim in args.dims:
        m = np.array(random_hermitian(dim, dim).matrix, order="C")
        number = max(1, 2000 // dim**2)
        times = {}
        for name, fn in backends.items():
            best = min(timeit.repeat(_timer(fn, m), number=number, repeat=args.repeat))
            times[name] = 1e3 * best / number
        speed = times["python"] / times["cython"] if "cython" in times else float("nan")
        print(f"{dim:>5} " + " ".join(f"{t:>14.4f}" for t in times.values()) + f" {speed:>8.1f}x")


if __name__ == "__main__":
    main()
