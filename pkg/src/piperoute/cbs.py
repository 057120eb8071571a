"""Conflict-based search: optimal vertex-disjoint routing.

Two-level search.  The high level runs best-first on total cost over a
binary constraint tree; each node holds one route per pipe plus per-pipe
sets of forbidden vertices.  Expanding a node picks its first vertex
conflict and branches into two children, each banning the conflict vertex
for one of the two pipes and re-planning just that pipe with A*.
"""

from __future__ import annotations

from dataclasses import dataclass
from heapq import heappop, heappush
from time import monotonic
from typing import List, Optional, Sequence, Tuple

from .errors import SearchTimeout
from .grid import Coord, manhattan
from .instances import Instance
from .search import backend, make_kernel
from .solution import Route, Solution, Status, routes_from_indices

DEFAULT_TIMEOUT = 100.0


@dataclass(frozen=True)
class Conflict:
    """Pipes pipe_i < pipe_j both route through vertex."""

    pipe_i: int
    pipe_j: int
    vertex: Coord


def detect_conflicts(routes: Sequence[Route]) -> Tuple[int, Optional[Conflict]]:
    """Count (pipe pair, vertex) collisions among coordinate routes.

    Returns (count, first) where first is the conflict minimizing
    (pipe_i, pipe_j, index of the vertex along pipe_i's route).
    """
    counts = {}
    for r in routes:
        for v in r.vertices:
            counts[v] = counts.get(v, 0) + 1
    total = sum(m * (m - 1) // 2 for m in counts.values() if m > 1)
    if total == 0:
        return 0, None
    users = {}
    for i, r in enumerate(routes):
        for v in r.vertices:
            if counts[v] > 1:
                users.setdefault(v, []).append(i)
    for i, r in enumerate(routes):
        best = None
        for idx, v in enumerate(r.vertices):
            if counts[v] > 1:
                for j in users[v]:
                    if j > i and (best is None or (j, idx) < best):
                        best = (j, idx)
        if best is not None:
            return total, Conflict(i, best[0], r.vertices[best[1]])
    raise RuntimeError("conflict count positive but no ordered pair found")


def solve_cbs(inst: Instance, timeout: float = DEFAULT_TIMEOUT) -> Solution:
    """Minimum-total-length vertex-disjoint routes for all pipes.

    Returns a solution with status optimal, infeasible, or timeout.  On
    timeout the lower bound is the cost of the cheapest constraint-tree node
    still open, which bounds the optimum from below.
    """
    grid = inst.grid
    deadline = monotonic() + timeout
    kern = make_kernel(grid)
    k = inst.k
    sidx = [grid.index(p.start) for p in inst.pipes]
    gidx = [grid.index(p.goal) for p in inst.pipes]
    mh_total = sum(manhattan(p.start, p.goal) for p in inst.pipes)
    scan = backend.conflict_scan
    empty = frozenset()

    try:
        routes = []
        for i in range(k):
            path = kern.astar(sidx[i], gidx[i], empty, deadline)
            if path is None:
                return Solution(Status.INFEASIBLE)
            routes.append(path)
    except SearchTimeout:
        return Solution(Status.TIMEOUT, lower_bound=mh_total)

    routes = tuple(routes)
    cost = sum(len(r) - 1 for r in routes)
    nconf, first = scan(routes)
    # heap entries: (cost, conflict count, insertion order, payload...)
    heap = [(cost, nconf, 0, routes, (empty,) * k, first)]
    counter = 1
    expanded = 0
    lb = cost

    try:
        while heap:
            if monotonic() > deadline:
                return Solution(Status.TIMEOUT, lower_bound=max(heap[0][0], lb),
                                hl_expanded=expanded)
            cost, nconf, _, routes, cons, first = heappop(heap)
            lb = cost
            expanded += 1
            if first is None:
                return Solution(Status.OPTIMAL, routes_from_indices(grid, routes),
                                cost=cost, lower_bound=cost, hl_expanded=expanded)
            ci, cj, cidx = first
            v = routes[ci][cidx]
            for side in (ci, cj):
                # never constrain a pipe away from its own endpoints
                if v == sidx[side] or v == gidx[side]:
                    continue
                banned = cons[side] | {v}
                path = kern.astar(sidx[side], gidx[side], banned, deadline)
                if path is None:
                    continue
                routes2 = routes[:side] + (path,) + routes[side + 1:]
                cost2 = cost - (len(routes[side]) - 1) + (len(path) - 1)
                nconf2, first2 = scan(routes2)
                cons2 = cons[:side] + (banned,) + cons[side + 1:]
                heappush(heap, (cost2, nconf2, counter, routes2, cons2, first2))
                counter += 1
    except SearchTimeout:
        return Solution(Status.TIMEOUT, lower_bound=lb, hl_expanded=expanded)
    return Solution(Status.INFEASIBLE, hl_expanded=expanded)
