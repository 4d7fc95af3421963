#!/usr/bin/env python3
"""Benchmark the compiled arithmetic kernel against the pure-Python fallback.

Three workloads:
  scalar   - mixed Gaussian-rational arithmetic (the innermost hot loop)
  rref     - sparse exact row reduction on synthetic solver-shaped systems
  solve    - end-to-end harmonic solve in a subprocess per backend

Run from the repository root:  python benchmarks/bench_kernel.py
"""

import os
import random
import subprocess
import sys
import time
from fractions import Fraction

from ahodge._kernel import _pure

try:
    from ahodge._kernel import _fast
except ImportError:
    _fast = None

BACKENDS = [("pure", _pure)] + ([("compiled", _fast)] if _fast else [])


def bench_scalar(mod, n=20000):
    rng = random.Random(42)
    xs = [
        mod.Scalar(Fraction(rng.randint(-9, 9), rng.randint(1, 7)),
                   Fraction(rng.randint(-9, 9), rng.randint(1, 7)))
        for _ in range(64)
    ]
    t0 = time.perf_counter()
    acc = mod.ZERO
    for i in range(n):
        a = xs[i % 64]
        b = xs[(i * 7 + 3) % 64]
        c = a * b + a - b
        if c:
            acc = acc + c / b if b else acc
    return time.perf_counter() - t0


def _collect_solver_systems():
    """Real per-class systems from a hyperelliptic Bott-Chern solve."""
    from ahodge import assemble, builtin, mode_classes

    hy = builtin("hyperelliptic")
    systems = []
    for cls in mode_classes(hy, 4, 2):
        if not cls.interior:
            continue
        asys = assemble(hy, "bc", (1, 1), cls, support=cls.interior)
        triples = [
            {c: (v.a, v.b, v.d) for c, v in row.items()} for row in asys.rows
        ]
        systems.append((triples, len(asys.cols)))
    return systems


def bench_rref(mod, systems, repeats=3):
    t0 = time.perf_counter()
    for _ in range(repeats):
        for triples, ncols in systems:
            rows = [
                {c: mod._scalar_raw(a, b, d) for c, (a, b, d) in row.items()}
                for row in triples
            ]
            rows.sort(key=len)
            mod.rref_rows(rows, ncols)
    return time.perf_counter() - t0


def bench_solve(backend):
    env = dict(os.environ)
    if backend == "pure":
        env["AHODGE_PURE"] = "1"
    else:
        env.pop("AHODGE_PURE", None)
    code = (
        "from ahodge import builtin, solve_harmonic, KERNEL_BACKEND\n"
        "assert KERNEL_BACKEND == %r\n"
        "r = solve_harmonic(builtin('hyperelliptic'), (1, 1), 'bc', 5, margin=2)\n"
        "assert r.dimension == 2\n" % backend
    )
    t0 = time.perf_counter()
    subprocess.run([sys.executable, "-c", code], env=env, check=True)
    return time.perf_counter() - t0


def main():
    print("kernel backends available:", ", ".join(name for name, _ in BACKENDS))
    systems = _collect_solver_systems()
    results = {}
    for name, mod in BACKENDS:
        results[name] = {
            "scalar": bench_scalar(mod),
            "rref": bench_rref(mod, systems),
        }
    for name, _ in BACKENDS:
        results[name]["solve"] = bench_solve(name)
    print(f"{'workload':<10}" + "".join(f"{name:>12}" for name, _ in BACKENDS) + f"{'speedup':>10}")
    for work in ("scalar", "rref", "solve"):
        row = f"{work:<10}"
        for name, _ in BACKENDS:
            row += f"{results[name][work]:>11.3f}s"
        if len(BACKENDS) == 2:
            row += f"{results['pure'][work] / results['compiled'][work]:>9.2f}x"
        print(row)


if __name__ == "__main__":
    main()
