"""Time the numba kernels against the pure-numpy fallback.

Usage: ``python3 benchmarks/bench_kernels.py [--sweep N] [--repeat K]``

Both backends run in this process; the dispatch table in
``compcycle.kernels`` is swapped between runs, so the numbers compare the
kernels alone on identical inputs.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from compcycle import (
    CycleClaim,
    build_adder_category,
    check_category_laws,
    check_compute_cycle,
    check_functor_laws,
    cogwheel_fixture,
    decode_functor,
    encode_functor,
    lts_to_category,
)
from compcycle import _kernels_jit, _kernels_np, kernels
from compcycle.maps import Functor

NAMES = ("category_violations", "functor_violations", "naturality_violations",
         "triangle_violations", "roundtrip_violations", "square_violations")


def use(module):
    for n in NAMES:
        setattr(kernels, n, getattr(module, n))


def best_of(run, repeat):
    times = []
    for _ in range(repeat):
        t = time.perf_counter()
        run()
        times.append(time.perf_counter() - t)
    return min(times)


def workloads(sweep):
    P = lts_to_category(cogwheel_fixture(10, 2))
    A = build_adder_category(10, 2)
    R = encode_functor(P, A, 10)
    Rt = decode_functor(A, P, 10)

    def laws():
        check_category_laws(P)
        check_category_laws(A)

    def functor():
        # a fresh instance each time: law rows are cached per functor
        check_functor_laws(Functor(P, A, R.obj_map, R.mor_map))

    def cycle():
        check_compute_cycle(CycleClaim(P, A, Functor(P, A, R.obj_map, R.mor_map),
                                       Functor(A, P, Rt.obj_map, Rt.mor_map)))

    def mutations():
        for f in range(sweep):
            mm = R.mor_map.copy()
            mm[f] = (mm[f] + 1) % A.n_morphisms
            check_compute_cycle(CycleClaim(P, A, R.with_maps(mor_map=mm), Rt))

    return [("category laws (2 x 10200 morphisms)", laws),
            ("functor laws (15250 composites)", functor),
            ("full compute cycle", cycle),
            (f"mutation sweep ({sweep} checks)", mutations)]


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--sweep", type=int, default=500, help="perturbations in the sweep row")
    p.add_argument("--repeat", type=int, default=3, help="best of this many runs")
    args = p.parse_args(argv)

    jobs = workloads(args.sweep)
    use(_kernels_jit)
    for _, run in jobs:  # compile outside the timed region
        run()
    rows = []
    for label, run in jobs:
        use(_kernels_jit)
        t_jit = best_of(run, args.repeat)
        use(_kernels_np)
        t_np = best_of(run, args.repeat)
        rows.append((label, t_jit, t_np))
    width = max(len(r[0]) for r in rows)
    print(f"{'workload':<{width}}  {'numba':>10}  {'numpy':>10}  {'speed-up':>8}")
    for label, t_jit, t_np in rows:
        print(f"{label:<{width}}  {t_jit * 1e3:>8.2f}ms  {t_np * 1e3:>8.2f}ms  "
              f"{t_np / t_jit:>7.1f}x")
    per_check = np.array([r[1] for r in rows[-1:]]) / args.sweep
    print(f"\nsweep cost per check with numba: {per_check[0] * 1e6:.0f}us; "
          f"61200 checks would take about {per_check[0] * 61200:.1f}s")


if __name__ == "__main__":
    main()
