#!/usr/bin/env python3
"""Time the compiled search kernel against the pure-Python fallback.

Both backends produce identical routes; this script measures the speed gap
on the operations that dominate solver runtime (low-level searches, conflict
scans, and a whole ECBS solve) and prints one table row per operation.

Usage: python3 benchmarks/compare_backends.py [--quick]
"""

import argparse
import os
import subprocess
import sys
from time import perf_counter

from piperoute import _fallback
from piperoute.instances import generate_obstacles
from piperoute.rng import SplitMix64

try:
    from piperoute import _speedups
except ImportError:
    print("compiled backend not built; nothing to compare", file=sys.stderr)
    sys.exit(1)


def bench(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = perf_counter()
        fn()
        best = min(best, perf_counter() - t0)
    return best


def kernel_rows(quick):
    dims, density, searches = ((12, 12, 6), 0.10, 20) if quick \
        else ((20, 20, 20), 0.10, 50)
    inst = generate_obstacles(dims, 2, density, 7)
    grid = inst.grid
    kc = _speedups.Kernel(grid.dims, grid.blocked_mask)
    kp = _fallback.Kernel(grid.dims, grid.blocked_mask)

    rng = SplitMix64(3)
    opens = [i for i in range(grid.size) if grid.is_open(grid.coord(i))]
    pairs = [(opens[rng.below(len(opens))], opens[rng.below(len(opens))])
             for _ in range(searches)]
    occ = rng.sample(opens, 40)

    def run_astar(kern):
        for s, g in pairs:
            kern.astar(s, g, frozenset(), None)

    def run_focal(kern):
        for s, g in pairs:
            kern.focal(s, g, frozenset(), 1.05, occ, None)

    routes = [kern_path for kern_path in
              (kc.astar(s, g, frozenset(), None) for s, g in pairs)
              if kern_path is not None]

    def run_scan(mod):
        for _ in range(200):
            mod.conflict_scan(routes)

    yield f"astar x{searches}", bench(lambda: run_astar(kp), 3), \
        bench(lambda: run_astar(kc), 3)
    yield f"focal(1.05) x{searches}", bench(lambda: run_focal(kp), 3), \
        bench(lambda: run_focal(kc), 3)
    yield "conflict_scan x200", bench(lambda: run_scan(_fallback), 3), \
        bench(lambda: run_scan(_speedups), 3)


def solve_row(quick):
    k = 20 if quick else 30
    code = (
        "from time import perf_counter\n"
        "from piperoute.ecbs import solve_ecbs\n"
        "from piperoute.instances import generate_empty\n"
        f"inst = generate_empty((20, 20, 20), {k}, 11)\n"
        "t0 = perf_counter()\n"
        "res = solve_ecbs(inst, w=1.05)\n"
        "assert res.solved\n"
        "print(perf_counter() - t0, res.cost)\n")
    times = {}
    costs = {}
    for name in ("python", "cython"):
        env = dict(os.environ, PIPEROUTE_BACKEND=name)
        out = subprocess.run([sys.executable, "-c", code], env=env,
                             capture_output=True, text=True, check=True)
        t, cost = out.stdout.split()
        times[name], costs[name] = float(t), cost
    assert costs["python"] == costs["cython"], "backends disagree on cost"
    return f"ecbs(1.05) 20^3 k={k}", times["python"], times["cython"]


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--quick", action="store_true",
                    help="smaller workloads, finishes in a few seconds")
    args = ap.parse_args()

    rows = list(kernel_rows(args.quick))
    rows.append(solve_row(args.quick))

    width = max(len(r[0]) for r in rows)
    print(f"{'operation':<{width}}  {'python':>10}  {'cython':>10}  speedup")
    for name, tp, tc in rows:
        print(f"{name:<{width}}  {tp:>9.4f}s  {tc:>9.4f}s  {tp / tc:>6.1f}x")


if __name__ == "__main__":
    main()
