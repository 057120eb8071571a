"""Independent solution checking and an exhaustive optimality oracle.

validate_solution re-derives every feasibility fact straight from the grid
and route coordinates; it shares no code with the searches it audits.
brute_force_optimal enumerates complete route tuples outright, so it is
usable only on tiny instances, where it serves as ground truth.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

from .errors import CapExceeded
from .grid import Coord, manhattan
from .instances import Instance
from .solution import Route, Solution, Status

ENDPOINT_MISMATCH = "EndpointMismatch"
NON_ADJACENT_STEP = "NonAdjacentStep"
BLOCKED_CELL = "BlockedCell"
REPEATED_VERTEX = "RepeatedVertexInRoute"
SHARED_VERTEX = "SharedVertex"
COST_MISMATCH = "CostMismatch"


@dataclass(frozen=True)
class Violation:
    kind: str
    details: str


def validate_solution(inst: Instance, sol: Solution) -> List[Violation]:
    """All feasibility violations of sol against inst; empty means valid.

    Checks endpoints, step adjacency, blocked/out-of-bounds cells, repeats
    within a route, vertex sharing across routes, and the claimed cost.
    """
    if len(sol.routes) != inst.k:
        raise ValueError(f"expected {inst.k} routes, got {len(sol.routes)}")
    grid = inst.grid
    out: List[Violation] = []
    for pipe, route in zip(inst.pipes, sol.routes):
        verts = route.vertices
        if not verts:
            out.append(Violation(ENDPOINT_MISMATCH, f"pipe {pipe.id}: empty route"))
            continue
        if verts[0] != pipe.start:
            out.append(Violation(ENDPOINT_MISMATCH,
                                 f"pipe {pipe.id}: route starts at {tuple(verts[0])}, "
                                 f"pipe starts at {tuple(pipe.start)}"))
        if verts[-1] != pipe.goal:
            out.append(Violation(ENDPOINT_MISMATCH,
                                 f"pipe {pipe.id}: route ends at {tuple(verts[-1])}, "
                                 f"pipe ends at {tuple(pipe.goal)}"))
        for i in range(len(verts) - 1):
            if manhattan(verts[i], verts[i + 1]) != 1:
                out.append(Violation(NON_ADJACENT_STEP,
                                     f"pipe {pipe.id}: step {i} from {tuple(verts[i])} "
                                     f"to {tuple(verts[i + 1])}"))
        for i, v in enumerate(verts):
            if not grid.in_bounds(v):
                out.append(Violation(BLOCKED_CELL,
                                     f"pipe {pipe.id}: vertex {i} at {tuple(v)} out of bounds"))
            elif not grid.is_open(v):
                out.append(Violation(BLOCKED_CELL,
                                     f"pipe {pipe.id}: vertex {i} at {tuple(v)} is blocked"))
        seen: Dict[Coord, int] = {}
        for i, v in enumerate(verts):
            if v in seen:
                out.append(Violation(REPEATED_VERTEX,
                                     f"pipe {pipe.id}: vertex {tuple(v)} at indices "
                                     f"{seen[v]} and {i}"))
            else:
                seen[v] = i

    users: Dict[Coord, List[int]] = {}
    for pipe, route in zip(inst.pipes, sol.routes):
        for v in set(route.vertices):
            users.setdefault(v, []).append(pipe.id)
    for v in sorted(users):
        ids = users[v]
        if len(ids) > 1:
            out.append(Violation(SHARED_VERTEX,
                                 f"pipes {ids} all use {tuple(v)}"))

    true_cost = sum(len(r.vertices) - 1 for r in sol.routes)
    if sol.cost != true_cost:
        out.append(Violation(COST_MISMATCH,
                             f"claimed {sol.cost}, routes sum to {true_cost}"))
    return out


def _splits(budgets: List[Tuple[int, int]], total: int):
    """All per-pipe exact-cost vectors summing to total.

    budgets[i] = (minimum cost, parity); every component keeps its pipe's
    manhattan parity, which any grid route must.
    """
    k = len(budgets)

    def rec(i: int, left: int, acc: List[int]):
        if i == k - 1:
            lo, _ = budgets[i]
            if left >= lo and (left - lo) % 2 == 0:
                yield acc + [left]
            return
        lo, _ = budgets[i]
        rest_min = sum(b[0] for b in budgets[i + 1:])
        c = lo
        while c <= left - rest_min:
            yield from rec(i + 1, left - c, acc + [c])
            c += 2

    yield from rec(0, total, [])


def brute_force_optimal(inst: Instance, cost_cap: Optional[int] = None) -> Solution:
    """Exact optimum by iterative deepening on total cost.

    For each candidate total (in steps of 2 from the manhattan sum), tries
    every per-pipe exact-cost split and depth-first enumerates disjoint
    simple routes.  The first total with a feasible tuple is the optimum.
    Infeasibility is decided exactly once the total exceeds what the open
    cells could ever carry; raises CapExceeded if cost_cap cuts off first.
    """
    grid = inst.grid
    k = inst.k
    mh = [manhattan(p.start, p.goal) for p in inst.pipes]
    mh_total = sum(mh)
    if cost_cap is None:
        cost_cap = 4 * mh_total + 8
    # disjoint simple routes occupy cost_i + 1 cells each
    feas_bound = grid.open_count - k
    bound = min(cost_cap, feas_bound)

    endpoints = set()
    for p in inst.pipes:
        endpoints.add(p.start)
        endpoints.add(p.goal)

    used: set = set()
    routes: List[Optional[List[Coord]]] = [None] * k

    def route_dfs(order: List[int], oi: int, pid: int, v: Coord, goal: Coord,
                  g: int, budget: int, path: List[Coord], banned: set) -> bool:
        if v == goal:
            if g == budget:
                routes[pid] = list(path)
                if pipe_dfs(order, oi + 1):
                    return True
                routes[pid] = None
            return False
        for u in grid.neighbors(v):
            if u in used or u in banned:
                continue
            if g + 1 + manhattan(u, goal) > budget:
                continue
            used.add(u)
            path.append(u)
            if route_dfs(order, oi, pid, u, goal, g + 1, budget, path, banned):
                return True
            path.pop()
            used.discard(u)
        return False

    def reach_ok(start: Coord, goal: Coord, budget: int, banned: set) -> bool:
        # flood fill; a budget-c route needs the goal reachable through
        # at least c+1 unused cells
        seen = {start}
        frontier = [start]
        while frontier:
            nxt = []
            for v in frontier:
                for u in grid.neighbors(v):
                    if u not in seen and u not in used and u not in banned:
                        seen.add(u)
                        nxt.append(u)
            frontier = nxt
        return goal in seen and len(seen) >= budget + 1

    def pipe_dfs(order: List[int], oi: int) -> bool:
        if oi == len(order):
            return True
        pid = order[oi]
        pipe = inst.pipes[pid]
        banned = endpoints - {pipe.start, pipe.goal}
        if pipe.start in used or pipe.goal in used:
            return False
        budget = split[pid]
        if not reach_ok(pipe.start, pipe.goal, budget, banned):
            return False
        used.add(pipe.start)
        ok = route_dfs(order, oi, pid, pipe.start, pipe.goal, 0, budget,
                       [pipe.start], banned)
        if not ok:
            used.discard(pipe.start)
        return ok

    budgets = [(mh[i], mh[i] % 2) for i in range(k)]
    for total in range(mh_total, bound + 1, 2):
        for split in _splits(budgets, total):
            # run tight budgets first so hopeless splits die cheaply
            order = sorted(range(k), key=lambda i: (split[i] - mh[i], i))
            used.clear()
            routes[:] = [None] * k
            if pipe_dfs(order, 0):
                final = tuple(Route(tuple(routes[i])) for i in range(k))
                return Solution(Status.OPTIMAL, final, cost=total,
                                lower_bound=total)
    if cost_cap >= feas_bound:
        return Solution(Status.INFEASIBLE)
    raise CapExceeded(f"no solution within cost cap {cost_cap}")
