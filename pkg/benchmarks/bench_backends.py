#!/usr/bin/env python3
"""Benchmark the numba kernels against their numpy fallbacks.

Runs each hot loop at realistic sizes for both backends and prints a table
of timings with the speedup factor.  Invoke from the repository root:

    python3 benchmarks/bench_backends.py            # full sizes
    python3 benchmarks/bench_backends.py --quick    # ~10x smaller

The backends are imported directly (not through GEODISC_BACKEND) so both
are measured in one process; a final consistency column confirms the two
implementations agree.
"""

import argparse
import math
import time

import numpy as np

from geodisc import _series_numpy
from geodisc import _series_numba  # noqa: F401  (compiles on first call)


def timeit(fn, *args, repeat=3):
    best = math.inf
    result = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best, result


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--quick", action="store_true", help="smaller sizes")
    opts = parser.parse_args()
    scale = 10 if opts.quick else 1

    rng = np.random.default_rng(0)
    alpha, beta, kappa = 7.0, 3.0, 1320.0  # the 16-dimensional projective plane

    L_radial = 1_300_000 // scale
    zs_grid = np.cos(np.linspace(0.01, math.pi, 121))
    coeffs = _series_numpy.radial_coefficients(alpha, beta, kappa,
                                               math.cos(1.1), 200_000 // scale)
    pair_z = rng.uniform(-1, 1, 4950)       # all pairs of a 100-point set
    L_pairs = 9_000 // max(scale // 4, 1)
    nodes = rng.uniform(-1, 1, 9_000 // max(scale // 4, 1))
    wts = rng.random(len(nodes))

    cases = [
        ("radial_coefficients(L=%d)" % L_radial,
         lambda impl: impl.radial_coefficients(alpha, beta, kappa,
                                               math.cos(1.1), L_radial)),
        ("zonal_series_pair(121 pts, L=%d)" % len(coeffs),
         lambda impl: impl.zonal_series_pair(zs_grid, coeffs, alpha, beta)),
        ("zonal_sum_table(4950 pairs, L=%d)" % L_pairs,
         lambda impl: impl.zonal_sum_table(pair_z, alpha, beta, L_pairs)),
        ("squared_poly_sums(%d nodes, L=%d)" % (len(nodes), len(nodes)),
         lambda impl: impl.squared_poly_sums(nodes, wts, alpha + 1, beta + 1,
                                             len(nodes))),
    ]

    # trigger jit compilation outside the timed region
    for _, fn in cases:
        fn(_series_numba)

    width = max(len(name) for name, _ in cases)
    print(f"{'kernel':<{width}}  {'numba':>9}  {'numpy':>9}  {'speedup':>8}  agree")
    for name, fn in cases:
        t_nb, r_nb = timeit(fn, _series_numba)
        t_np, r_np = timeit(fn, _series_numpy)
        flat_nb = np.concatenate([np.atleast_1d(x) for x in
                                  (r_nb if isinstance(r_nb, tuple) else (r_nb,))])
        flat_np = np.concatenate([np.atleast_1d(x) for x in
                                  (r_np if isinstance(r_np, tuple) else (r_np,))])
        # the recurrences round differently and drift grows with the degree;
        # the column flags structural disagreement, not rounding noise
        agree = np.allclose(flat_nb, flat_np, rtol=1e-6, atol=1e-14)
        print(f"{name:<{width}}  {t_nb * 1e3:8.1f}ms  {t_np * 1e3:8.1f}ms"
              f"  {t_np / t_nb:7.1f}x  {agree}")


if __name__ == "__main__":
    main()
