"""Timing comparison of the compiled and numpy kernel lanes.

Measures the individual hot kernels on representative 1D/3D workloads and a
short full integration with each lane.  Run from the repo root:

    python benchmarks/bench_backends.py
"""

import time

import numpy as np

from llgfd import _kernels_np as knp
from llgfd import backend, make_grid, mms, stepper

try:
    from llgfd import _kernels as kcy
except ImportError:
    kcy = None


def best_of(fn, repeats=7):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_kernels(dim, n):
    rng = np.random.default_rng(0)
    ext = (3,) + (n + 4,) * dim
    intr = (3,) + (n,) * dim
    h = 1.0 / n
    a = rng.standard_normal(ext)
    knp.fill_ghosts(a, dim)
    out = np.empty(intr)
    gs = np.empty((n,) * dim)
    tt = rng.standard_normal(intr)
    m_hat = rng.standard_normal(intr)
    lap = rng.standard_normal(intr)
    cases = [
        ("fill_ghosts", lambda k: k.fill_ghosts(a, dim)),
        ("d1_long", lambda k: k.d1_long(a, dim, 0, h, out)),
        ("laplacian4", lambda k: k.laplacian4(a, dim, h, out)),
        ("grad_sq4", lambda k: k.grad_sq4(a, dim, h, gs)),
        ("project", lambda k: k.project(tt + 3.0, out, 0.25)),
        ("assemble_rhs", lambda k: k.assemble_rhs(tt, m_hat, lap, gs, 10.0, out)),
        ("lincomb3", lambda k: k.lincomb3(3.0, a, -3.0, a, 1.0, a, np.empty(ext))),
    ]
    print(f"\n== kernels, dim={dim}, N={n} ({n**dim} cells) ==")
    print(f"{'kernel':>14} {'numpy':>10} {'cython':>10} {'speedup':>8}")
    for name, fn in cases:
        tn = best_of(lambda: fn(knp)) * 1e6
        if kcy is None:
            print(f"{name:>14} {tn:9.1f}us {'-':>10} {'-':>8}")
            continue
        tc = best_of(lambda: fn(kcy)) * 1e6
        print(f"{name:>14} {tn:9.1f}us {tc:9.1f}us {tn / tc:7.2f}x")


def bench_integration(dim, n, nt, t_final):
    sol = mms.solution_for(dim)
    grid = make_grid(dim, n)
    results = {}
    lanes = ["numpy"] + (["cython"] if kcy is not None else [])
    for name in lanes:
        backend.use(name)
        params = stepper.SchemeParams(
            alpha=10.0, k=t_final / nt, t_final=t_final,
            forcing=mms.GriddedForcing(sol, grid, 10.0),
        )
        t0 = time.perf_counter()
        stepper.run(grid, params, sol.value)
        results[name] = time.perf_counter() - t0
    print(f"\n== integration, dim={dim}, N={n}, {nt} steps ==")
    for name, wall in results.items():
        print(f"{name:>8}: {wall:6.2f}s  ({wall / nt * 1e6:7.0f} us/step)")
    if len(results) == 2:
        print(f" speedup: {results['numpy'] / results['cython']:.2f}x")


def main():
    if kcy is None:
        print("compiled extension not available; showing numpy lane only")
    bench_kernels(1, 512)
    bench_kernels(3, 28)
    bench_integration(1, 256, 5000, 0.05)
    bench_integration(3, 20, 500, 0.25)
    backend.use("cython" if kcy is not None else "numpy")


if __name__ == "__main__":
    main()
