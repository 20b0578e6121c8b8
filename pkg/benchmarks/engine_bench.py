#!/usr/bin/env python3
"""Benchmark the numba kernels against the pure-numpy fallback.

Three workloads:

* rasterisation of arrow-fan bitmask cubes for every vertex of a window
  (the hot kernel behind every sweep);
* the exhaustive associativity scan over all composable arrow triples;
* an end-to-end certification run (subprocessed twice with
  KGCERT_BACKEND=numba / numpy so each run selects its backend at import).

Usage: python benchmarks/engine_bench.py [--skip-certify]
"""

from __future__ import annotations

import argparse
import os
import subprocess
import sys
import time

import numpy as np

from kgcert import _kernels, model
from kgcert.engine import WindowEngine, _clip
from kgcert.presentation import validate_triple


def time_it(fn, repeat=3):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_fan_cubes(t, box):
    eng = WindowEngine(t, box)
    verts = eng.vertices()

    def run(kernel):
        eng2 = WindowEngine(t, box)
        xs, ys = eng2.xs, eng2.ys
        for v in verts:
            rows = []
            for e in model.arrow_fan(t, v).entries:
                rows.append(
                    (
                        eng2.chan_index[(e.family, e.orbit)],
                        1 << (e.degree + 1),
                        _clip(e.region.lo_x),
                        _clip(e.region.hi_x),
                        _clip(e.region.lo_y),
                        _clip(e.region.hi_y),
                        1 if e.excludes_src else 0,
                        v.coord[0],
                        v.coord[1],
                    )
                )
            kernel(xs, ys, np.asarray(rows, dtype=np.int64), eng2.nchan)

    out = {"numpy": time_it(lambda: run(_kernels.fan_cube_numpy))}
    if _kernels.HAS_NUMBA:
        run(_kernels.fan_cube_numba)  # warm the jit
        out["numba"] = time_it(lambda: run(_kernels.fan_cube_numba))
    return len(verts), out


def bench_assoc(t, box):
    eng = WindowEngine(t, box)
    verts = eng.vertices()
    nv = len(verts)
    ebits = np.zeros((nv, nv), dtype=np.uint8)
    chan_members = {}
    for j, w in enumerate(verts):
        ci = eng.chan_index[(w.family, w.orbit)]
        chan_members.setdefault(ci, []).append((j, w))
    for i, v in enumerate(verts):
        cube = eng.cube(v)
        for ci, members in chan_members.items():
            for j, w in members:
                ix, iy = eng.point_index(w.coord)
                ebits[i, j] |= cube[ci, ix, iy]
    srcs, dsts, degs = [], [], []
    for i in range(nv):
        for j in range(nv):
            for d in range(t.max_degree + 1):
                if ebits[i, j] & (1 << (d + 1)):
                    srcs.append(i)
                    dsts.append(j)
                    degs.append(d)
    srcs = np.asarray(srcs, dtype=np.int64)
    dsts = np.asarray(dsts, dtype=np.int64)
    degs = np.asarray(degs, dtype=np.int64)
    order = np.argsort(srcs, kind="stable")
    srcs, dsts, degs = srcs[order], dsts[order], degs[order]
    indptr = np.zeros(nv + 1, dtype=np.int64)
    np.add.at(indptr, srcs + 1, 1)
    indptr = np.cumsum(indptr)

    args = (ebits, srcs, dsts, degs, indptr, t.max_degree)
    out = {"numpy": time_it(lambda: _kernels.assoc_violation_numpy(*args), repeat=1)}
    if _kernels.HAS_NUMBA:
        _kernels.assoc_violation_numba(*args)
        out["numba"] = time_it(lambda: _kernels.assoc_violation_numba(*args))
    return len(srcs), out


def bench_certify():
    out = {}
    for backend in ("numba", "numpy"):
        if backend == "numba" and not _kernels.HAS_NUMBA:
            continue
        env = dict(os.environ, KGCERT_BACKEND=backend)
        code = (
            "import time\n"
            "from kgcert.presentation import validate_triple\n"
            "from kgcert.certifier import certify\n"
            "from kgcert.functors import Window\n"
            "t0 = time.perf_counter()\n"
            "cert = certify(validate_triple(1, 2, 0), Window(-8, 8, -8, 8), 8)\n"
            "assert cert.passed\n"
            "print(time.perf_counter() - t0)\n"
        )
        res = subprocess.run(
            [sys.executable, "-c", code], env=env, capture_output=True, text=True
        )
        if res.returncode != 0:
            raise RuntimeError(res.stderr)
        out[backend] = float(res.stdout.strip().splitlines()[-1])
    return out


def main(argv=None):
    ap = argparse.ArgumentParser()
    ap.add_argument("--skip-certify", action="store_true")
    args = ap.parse_args(argv)

    print(f"active backend: {_kernels.BACKEND} (override with KGCERT_BACKEND)")
    t = validate_triple(2, 3, 1)
    nverts, res = bench_fan_cubes(t, (-8, 8, -8, 8))
    print(f"\nfan-cube rasterisation, {nverts} vertices on [-8,8]^2, triple (2,3,1):")
    for k, v in res.items():
        print(f"  {k:6s} {v * 1000:8.1f} ms")

    t = validate_triple(1, 2, 0)
    narrows, res = bench_assoc(t, (-4, 4, -4, 4))
    print(f"\nassociativity scan, {narrows} arrows on [-4,4]^2, triple (1,2,0):")
    for k, v in res.items():
        print(f"  {k:6s} {v * 1000:8.1f} ms")

    if not args.skip_certify:
        print("\nend-to-end certify (1,2,0), window [-8,8]^2, depth 8 (fresh process each):")
        for k, v in bench_certify().items():
            print(f"  {k:6s} {v:8.2f} s")
    return 0


if __name__ == "__main__":
    sys.exit(main())
