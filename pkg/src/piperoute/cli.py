"""Command line front end: gen, solve, validate, bench.

Thin adapters over the library; no routing logic lives here.  Solve exit
codes are fixed so scripts can branch on outcomes: 0 solved, 2 infeasible,
3 timeout, 4 order failed, 1 bad input.
"""

from __future__ import annotations

import argparse
import sys
from itertools import permutations
from time import monotonic
from typing import List, Optional

from .bench import load_config, run_suite
from .cbs import solve_cbs
from .ecbs import solve_ecbs
from .errors import PipeRouteError
from .instances import (generate_empty, generate_obstacles, load_instance,
                        load_solution, save_instance, save_solution)
from .priority import solve_prioritized
from .solution import OrderFailed, Solution
from .validation import validate_solution

ECBS_DEFAULT_W = 1.01
ALL_ORDERS_MAX_K = 8


class _Parser(argparse.ArgumentParser):
    # bad flags exit 1, leaving 2/3/4 free for solver outcomes
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    p = _Parser(prog="piperoute",
                description="Vertex-disjoint pipe routing on 3D grids.")
    sub = p.add_subparsers(dest="cmd", required=True)

    g = sub.add_parser("gen", help="generate a random instance file")
    g.add_argument("--dims", required=True, help="grid size X,Y,Z")
    g.add_argument("--pipes", required=True, type=int, help="number of pipes")
    g.add_argument("--seed", required=True, type=int, help="generator seed")
    g.add_argument("--obstacles", type=float, default=None,
                   help="obstacle-column density in [0,1); omit for empty")
    g.add_argument("--out", required=True, help="instance file to write")

    s = sub.add_parser("solve", help="solve an instance file")
    s.add_argument("--algo", required=True, choices=("cbs", "ecbs", "priority"))
    s.add_argument("--w", type=float, default=None,
                   help=f"ecbs suboptimality factor (default {ECBS_DEFAULT_W})")
    s.add_argument("--order", default=None,
                   help="priority: comma-separated pipe ids")
    s.add_argument("--all-orders", action="store_true",
                   help=f"priority: try every order (K <= {ALL_ORDERS_MAX_K})")
    s.add_argument("--timeout", type=float, default=100.0,
                   help="wall-clock budget per solve in seconds")
    s.add_argument("--in", dest="infile", required=True, help="instance file")
    s.add_argument("--out", dest="outfile", default=None,
                   help="solution file (written only when solved)")

    v = sub.add_parser("validate", help="check a solution against an instance")
    v.add_argument("--instance", required=True)
    v.add_argument("--solution", required=True)

    b = sub.add_parser("bench", help="run a benchmark suite to CSV")
    b.add_argument("--config", required=True, help="key = value suite config")
    b.add_argument("--out", required=True, help="CSV path (appends, resumes)")
    return p


def _fail(msg: str) -> int:
    print(f"piperoute: error: {msg}", file=sys.stderr)
    return 1


def cmd_gen(args) -> int:
    try:
        dims = tuple(int(x) for x in args.dims.split(","))
        if len(dims) != 3:
            raise ValueError("--dims needs X,Y,Z")
    except ValueError as e:
        return _fail(str(e))
    try:
        if args.obstacles is None:
            inst = generate_empty(dims, args.pipes, args.seed)
        else:
            inst = generate_obstacles(dims, args.pipes, args.obstacles, args.seed)
        save_instance(inst, args.out)
    except (PipeRouteError, ValueError) as e:
        return _fail(str(e))
    X, Y, Z = dims
    print(f"dims {X}x{Y}x{Z} pipes {inst.k} blocked {inst.grid.blocked_count} "
          f"-> {args.out}")
    return 0


def _outcome_line(status: str, cost, lb, runtime: float) -> str:
    c = "-" if cost is None else str(cost)
    b = "-" if lb is None else str(lb)
    return f"{status} {c} {b} {runtime:.3f}"


def _finish_solve(res, runtime: float, outfile: Optional[str]) -> int:
    if isinstance(res, OrderFailed):
        print(_outcome_line(f"order_failed({res.pipe})", None, None, runtime))
        return 4
    if res.solved:
        status = res.status if res.w is None else f"{res.status}({res.w:g})"
        if outfile:
            save_solution(res, outfile)
        print(_outcome_line(status, res.cost, res.lower_bound, runtime))
        return 0
    print(_outcome_line(res.status, res.cost, res.lower_bound, runtime))
    return 2 if res.status == "infeasible" else 3


def _solve_all_orders(inst, timeout: float, outfile: Optional[str]) -> int:
    """Try every priority order; report the best solved or certify failure."""
    if inst.k > ALL_ORDERS_MAX_K:
        return _fail(f"--all-orders supports at most {ALL_ORDERS_MAX_K} pipes")
    best: Optional[Solution] = None
    timed_out = False
    t0 = monotonic()
    for order in permutations(range(inst.k)):
        res = solve_prioritized(inst, order, timeout)
        if isinstance(res, OrderFailed):
            continue
        if res.status == "timeout":
            timed_out = True
        elif best is None or res.cost < best.cost:
            best = res
    runtime = monotonic() - t0
    if best is not None:
        if outfile:
            save_solution(best, outfile)
        print(_outcome_line("heuristic", best.cost, best.lower_bound, runtime))
        return 0
    if timed_out:
        print(_outcome_line("timeout", None, None, runtime))
        return 3
    print(_outcome_line("order_failed(all)", None, None, runtime))
    return 4


def cmd_solve(args) -> int:
    if args.algo != "ecbs" and args.w is not None:
        return _fail("--w applies to ecbs only")
    if args.algo != "priority" and (args.order or args.all_orders):
        return _fail("--order/--all-orders apply to priority only")
    if args.order and args.all_orders:
        return _fail("--order conflicts with --all-orders")
    try:
        inst = load_instance(args.infile)
    except (OSError, PipeRouteError) as e:
        return _fail(str(e))

    if args.algo == "priority" and args.all_orders:
        return _solve_all_orders(inst, args.timeout, args.outfile)

    order = None
    if args.order is not None:
        try:
            order = tuple(int(x) for x in args.order.split(","))
        except ValueError:
            return _fail("--order must be comma-separated integers")

    t0 = monotonic()
    try:
        if args.algo == "cbs":
            res = solve_cbs(inst, args.timeout)
        elif args.algo == "ecbs":
            res = solve_ecbs(inst, args.w if args.w is not None else ECBS_DEFAULT_W,
                             args.timeout)
        else:
            res = solve_prioritized(inst, order, args.timeout)
    except ValueError as e:
        return _fail(str(e))
    return _finish_solve(res, monotonic() - t0, args.outfile)


def cmd_validate(args) -> int:
    try:
        inst = load_instance(args.instance)
        sol = load_solution(args.solution)
        problems = validate_solution(inst, sol)
    except (OSError, PipeRouteError, ValueError) as e:
        return _fail(str(e))
    if problems:
        for v in problems:
            print(f"{v.kind}: {v.details}")
        return 1
    print("ok")
    return 0


def cmd_bench(args) -> int:
    try:
        cfg = load_config(args.config)
        records = run_suite(cfg, args.out)
    except (OSError, PipeRouteError, ValueError) as e:
        return _fail(str(e))
    print(f"{len(records)} records -> {args.out}")
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    args = _build_parser().parse_args(argv)
    handler = {"gen": cmd_gen, "solve": cmd_solve,
               "validate": cmd_validate, "bench": cmd_bench}[args.cmd]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())
