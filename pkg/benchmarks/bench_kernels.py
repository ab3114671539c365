"""Time the numba and numpy series kernels on long q-power sums.

    python3 benchmarks/bench_kernels.py --repeat 5
"""
from __future__ import annotations

import argparse
import math
import time

import numpy as np

from hqzeta import _kernels

# name, q, a, b, x, w, character values, terms
CASES = [
    ("zeta q=0.9999 s=2", 0.9999, 1.0, 0.0, 1.0, 2.0, [1.0], 2_000_000),
    ("hurwitz q=0.999 s=0.5+1.3i", 0.999, 1.0, 0.0, 0.5, 0.5 + 1.3j, [1.0], 500_000),
    ("L chi4 q=0.999 h=2 s=3", 0.999, 2.0, 0.0, 1.0, 3.0, [0.0, 1.0, 0.0, -1.0], 1_000_000),
]


def _time(kernel, args, repeat):
    best = math.inf
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = kernel(*args)
        best = min(best, time.perf_counter() - t0)
    return best, out


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=3, help="timed runs per backend (best is reported)")
    parser.add_argument("--scale", type=float, default=1.0, help="multiply the number of terms")
    args = parser.parse_args(argv)

    if not _kernels.HAVE_NUMBA:
        parser.error("numba is not installed")
    print(f"{'case':<30} {'terms':>9} {'numba s':>9} {'numpy s':>9} {'speedup':>8} {'|diff|':>9}")
    for name, q, a, b, x, w, chi, terms in CASES:
        lnq = math.log(q)
        chi = np.asarray(chi, dtype=complex)
        n = max(1, int(terms * args.scale))
        call = (lnq, -math.expm1(lnq), a, b, x, w.real if isinstance(w, complex) else float(w),
                w.imag if isinstance(w, complex) else 0.0, chi.real.copy(), chi.imag.copy(), 0, n)
        _kernels._block_jit(*call[:-1], min(n, 10))  # compile outside the timed region
        t_jit, r_jit = _time(_kernels._block_jit, call, args.repeat)
        t_np, r_np = _time(_kernels._block_numpy, call, args.repeat)
        diff = abs(complex(r_jit[0], r_jit[1]) - complex(r_np[0], r_np[1]))
        print(f"{name:<30} {n:>9} {t_jit:>9.4f} {t_np:>9.4f} {t_np / t_jit:>7.2f}x {diff:>9.2e}")


if __name__ == "__main__":
    main()
