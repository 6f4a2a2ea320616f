"""Timing comparison of the compiled kernels against the numpy reference.

Usage:  python benchmarks/bench_kernels.py [--repeats N]

Workloads mirror the package's hot paths: quartic value/gradient evaluation
at solver-fixture size and at a larger synthetic size, plus Lennard-Jones
cluster energy/gradient at small and medium atom counts.
"""

import argparse
import timeit

import numpy as np

from canodual import build_program, fixtures
from canodual.kernels import native, reference


def synthetic_packed(rng, n, m):
    A = rng.standard_normal((m, n, n))
    A = np.ascontiguousarray(0.5 * (A + np.transpose(A, (0, 2, 1))))
    return (
        np.ascontiguousarray(rng.uniform(0.5, 2.0, m)),
        A,
        np.ascontiguousarray(rng.standard_normal((m, n))),
        np.ascontiguousarray(rng.standard_normal(m)),
        np.ascontiguousarray(np.eye(n)),
        np.ascontiguousarray(rng.standard_normal(n)),
    )


def cluster(rng, n):
    return np.ascontiguousarray(rng.uniform(0.0, 1.5, (n, 3)) + np.arange(n)[:, None])


def workloads(rng):
    fix = build_program(fixtures.load_instance("3nvg-model-1")).packed
    x_fix = rng.standard_normal(fix.f.shape[0])
    big = synthetic_packed(rng, 60, 20)
    x_big = rng.standard_normal(60)
    small_cluster = cluster(rng, 13)
    med_cluster = cluster(rng, 55)
    return [
        ("quartic value (n=6, m=3)", "quartic_value", (*fix, x_fix)),
        ("quartic grad  (n=6, m=3)", "quartic_value_grad", (*fix, x_fix)),
        ("quartic value (n=60, m=20)", "quartic_value", (*big, x_big)),
        ("quartic grad  (n=60, m=20)", "quartic_value_grad", (*big, x_big)),
        ("lj energy (N=13)", "lj_value", (small_cluster,)),
        ("lj grad   (N=13)", "lj_value_grad", (small_cluster,)),
        ("lj energy (N=55)", "lj_value", (med_cluster,)),
        ("lj grad   (N=55)", "lj_value_grad", (med_cluster,)),
    ]


def best_time(fun, args, repeats):
    calls = 200
    timer = timeit.Timer(lambda: fun(*args))
    return min(timer.repeat(repeats, calls)) / calls


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeats", type=int, default=7)
    args = parser.parse_args()

    rng = np.random.default_rng(0)
    rows = []
    for label, fname, fargs in workloads(rng):
        t_ref = best_time(getattr(reference, fname), fargs, args.repeats)
        if native is not None:
            t_nat = best_time(getattr(native, fname), fargs, args.repeats)
            rows.append((label, t_ref, t_nat, t_ref / t_nat))
        else:
            rows.append((label, t_ref, None, None))

    print(f"{'workload':<28} {'reference':>12} {'native':>12} {'speedup':>9}")
    for label, t_ref, t_nat, speedup in rows:
        ref_us = f"{t_ref * 1e6:9.2f} us"
        if t_nat is None:
            print(f"{label:<28} {ref_us:>12} {'n/a':>12} {'n/a':>9}")
        else:
            nat_us = f"{t_nat * 1e6:9.2f} us"
            print(f"{label:<28} {ref_us:>12} {nat_us:>12} {speedup:8.1f}x")
    if native is None:
        print("\ncompiled kernels unavailable; showing reference timings only")


if __name__ == "__main__":
    main()
