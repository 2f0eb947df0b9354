"""Compare the numba kernels with the numpy fallback.

    python3 benchmarks/bench_accel.py [--repeat N]

The exact Fraction code is not covered: it never reaches these kernels.
"""

import argparse
import time

import numpy as np

from tripletvoa import _accel
from tripletvoa.chars import _series_arrays, char_irreducible
from tripletvoa.fock import Lattice
from tripletvoa.linalg import integer_rows


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()
    if not _accel.HAVE_NUMBA:
        print("numba unavailable (or disabled); only the numpy path runs")

    cases = []
    L = Lattice(3)
    _, _, rows = L.qtilde_matrix(8)
    mat = integer_rows(rows)
    cases.append((f"rank mod prime, Qt matrix p=3 d=8 ({len(mat)}x{len(mat[0])})",
                  lambda nb: _accel.rank_mod_prime(mat, use_numba=nb)))
    rng = np.random.default_rng(0)
    big = rng.integers(-1000, 1000, size=(300, 300)).tolist()
    cases.append(("rank mod prime, random 300x300", lambda nb: _accel.rank_mod_prime(big, use_numba=nb)))
    exps, coeffs = _series_arrays(char_irreducible("Lambda", 1, 3, 200, check=False).series)
    taus = [1j * np.exp(1j * phi) for phi in np.linspace(-0.3, 0.3, 50)]
    cases.append((f"series evaluation, {len(exps)} terms x {len(taus)} points",
                  lambda nb: [_accel.eval_series(exps, coeffs, t, use_numba=nb) for t in taus]))

    print(f"{'case':58s} {'numpy':>10s} {'numba':>10s} {'speedup':>8s}")
    for name, fn in cases:
        t_np, r_np = best_of(lambda: fn(False), args.repeat)
        if _accel.HAVE_NUMBA:
            fn(True)  # compile outside the timing
            t_nb, r_nb = best_of(lambda: fn(True), args.repeat)
            assert np.allclose(np.asarray(r_np), np.asarray(r_nb)), name
            print(f"{name:58s} {t_np * 1e3:9.2f}ms {t_nb * 1e3:9.2f}ms {t_np / t_nb:7.1f}x")
        else:
            print(f"{name:58s} {t_np * 1e3:9.2f}ms {'-':>10s} {'-':>8s}")


if __name__ == "__main__":
    main()
