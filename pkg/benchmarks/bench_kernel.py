#!/usr/bin/env python3
"""Benchmark the compiled kernel extension against the pure-Python fallback.

Both implementations are loaded side by side (the package's import-time
selection is bypassed), run on identical seeded workloads, and compared:

* fm        -- exact feasibility + witness on random mixed systems
* dd        -- double description of random homogeneous cones
* hrep2vrep -- full H -> V conversions through the polyhedral layer
* ncset     -- end-to-end set calculus (canonicalize/sum/image) per kernel,
               measured in subprocesses so module state stays clean

Usage: python benchmarks/bench_kernel.py [--repeat N]
"""

import argparse
import random
import subprocess
import sys
import time


def _workload_systems(seed, count):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.randrange(1, 5)
        def rows(m):
            rs = []
            for _ in range(m):
                rs.append(tuple(rng.randrange(-4, 5) for _ in range(n)) + (rng.randrange(-5, 6),))
            return rs
        out.append((n, rows(rng.randrange(0, 2)), rows(rng.randrange(1, 9)), rows(rng.randrange(0, 3))))
    return out


def _workload_cones(seed, count):
    rng = random.Random(seed)
    out = []
    for _ in range(count):
        n = rng.randrange(2, 5)
        m = rng.randrange(1, 9)
        rows = []
        for _ in range(m):
            r = tuple(rng.randrange(-3, 4) for _ in range(n))
            if any(r):
                rows.append(r)
        out.append((n, rows))
    return out


def bench_fm(impl, systems):
    t0 = time.perf_counter()
    acc = 0
    for n, eq, le, lt in systems:
        if impl.fm_feasible(n, eq, le, lt) is not None:
            acc += 1
    return time.perf_counter() - t0, acc


def bench_dd(impl, cones):
    t0 = time.perf_counter()
    acc = 0
    for n, rows in cones:
        rays, lin = impl.dd_cone(n, rows, [])
        acc += len(rays) + len(lin)
    return time.perf_counter() - t0, acc


def bench_conversions(impl, systems):
    t0 = time.perf_counter()
    acc = 0
    for n, eq, le, lt in systems:
        hom_le = [r[:-1] + (-r[-1],) for r in le] + [(0,) * n + (-1,)]
        hom_eq = [r[:-1] + (-r[-1],) for r in eq]
        rays, lin = impl.dd_cone(n + 1, hom_le, hom_eq)
        acc += len(rays)
    return time.perf_counter() - t0, acc


NCSET_SNIPPET = r"""
import random, time, sys
sys.path.insert(0, "tests")
import genpoly
from ncx import ncset as ns, polykernel as pk, kernel
rng = random.Random(99)
t0 = time.perf_counter()
for _ in range(30):
    dim = rng.choice([1, 2, 2])
    e = genpoly.random_nearly_convex(rng, dim)
    e2 = genpoly.random_nearly_convex(rng, dim)
    A = genpoly.random_map(rng, dim, rng.choice([1, dim]))
    ns.rel_interior(ns.nc_sum(e, e2))
    ns.rel_interior(ns.nc_image(e, A))
print(kernel.IMPLEMENTATION, time.perf_counter() - t0)
"""


def bench_ncset(pure: bool):
    env = dict(NCX_PURE="1") if pure else {}
    import os

    full_env = dict(os.environ)
    full_env.update(env)
    out = subprocess.run(
        [sys.executable, "-c", NCSET_SNIPPET], capture_output=True, text=True, env=full_env, check=True
    )
    name, secs = out.stdout.split()
    return name, float(secs)


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    from ncx import _kernel as pure

    try:
        from ncx import _speedups as compiled
    except ImportError:
        print("compiled extension not available; build it with `pip install -e .`")
        return 1

    systems = _workload_systems(1, 600)
    cones = _workload_cones(2, 400)

    rows = []
    for name, fn, payload in [
        ("fm", bench_fm, systems),
        ("dd", bench_dd, cones),
        ("hrep2vrep", bench_conversions, systems),
    ]:
        tp = min(fn(pure, payload)[0] for _ in range(args.repeat))
        tc = min(fn(compiled, payload)[0] for _ in range(args.repeat))
        rp, rc = fn(pure, payload)[1], fn(compiled, payload)[1]
        assert rp == rc, f"{name}: implementations disagree"
        rows.append((name, tp, tc))

    name_p, tp = bench_ncset(pure=True)
    name_c, tc = bench_ncset(pure=False)
    assert name_p == "pure"
    label = "ncset" if name_c == "compiled" else "ncset (pure twice)"
    rows.append((label, tp, tc))

    print(f"{'workload':<14} {'pure [s]':>10} {'compiled [s]':>13} {'speedup':>9}")
    for name, tp, tc in rows:
        print(f"{name:<14} {tp:>10.3f} {tc:>13.3f} {tp / tc:>8.2f}x")
    return 0


if __name__ == "__main__":
    sys.exit(main())
