"""Bounded-suboptimal routing: focal search at both levels.

Same constraint tree as the optimal solver, but both levels may return any
candidate within factor w of the best bound.  The low level plans single
routes with focal A* that prefers routes avoiding cells occupied by the
other pipes; the high level keeps a focal set of tree nodes whose cost is
within w of the smallest node lower bound and expands the one with the
fewest conflicts.  The returned cost is guaranteed within w of the optimum.
"""

from __future__ import annotations

from array import array
from heapq import heappop, heappush
from math import floor
from time import monotonic
from typing import List, Optional

from .errors import SearchTimeout
from .grid import manhattan
from .instances import Instance
from .search import backend, make_kernel
from .solution import Solution, Status, routes_from_indices

DEFAULT_W = 1.05
DEFAULT_TIMEOUT = 100.0


class _Node:
    __slots__ = ("routes", "cons", "fmins", "cost", "lb", "nconf", "first",
                 "order", "expanded")

    def __init__(self, routes, cons, fmins, cost, lb, nconf, first, order):
        self.routes = routes
        self.cons = cons
        self.fmins = fmins
        self.cost = cost
        self.lb = lb
        self.nconf = nconf
        self.first = first
        self.order = order
        self.expanded = False


def _occupied(routes, skip: int) -> array:
    occ = array("i")
    for i, r in enumerate(routes):
        if i != skip:
            occ.extend(r)
    return occ


def solve_ecbs(inst: Instance, w: float = DEFAULT_W,
               timeout: float = DEFAULT_TIMEOUT) -> Solution:
    """Vertex-disjoint routes with total cost at most w times the optimum.

    Returns status bounded on success, carrying the proven lower bound; on
    timeout the best lower bound seen so far is still reported.
    """
    if w < 1.0:
        raise ValueError("suboptimality factor w must be >= 1")
    grid = inst.grid
    deadline = monotonic() + timeout
    kern = make_kernel(grid)
    k = inst.k
    sidx = [grid.index(p.start) for p in inst.pipes]
    gidx = [grid.index(p.goal) for p in inst.pipes]
    lbmin = sum(manhattan(p.start, p.goal) for p in inst.pipes)
    scan = backend.conflict_scan
    empty = frozenset()
    expanded = 0

    try:
        routes: List = []
        fmins = []
        occ = array("i")
        for i in range(k):
            res = kern.focal(sidx[i], gidx[i], empty, w, occ, deadline)
            if res is None:
                return Solution(Status.INFEASIBLE)
            path, fmin = res
            routes.append(path)
            fmins.append(fmin)
            occ.extend(path)
    except SearchTimeout:
        return Solution(Status.TIMEOUT, lower_bound=lbmin)

    cost = sum(len(r) - 1 for r in routes)
    nconf, first = scan(routes)
    root = _Node(tuple(routes), (empty,) * k, tuple(fmins), cost,
                 sum(fmins), nconf, first, 0)
    counter = 1
    # lb_heap orders all live nodes by lower bound (lazy deletion);
    # cost_heap holds nodes whose cost exceeds the focal threshold, drained
    # into focal as the threshold rises.  Node lower bounds only grow down
    # any branch, so the threshold never moves backwards.
    lb_heap = [(root.lb, 0, root)]
    cost_heap: List = []
    focal = [(root.nconf, 0, root)]

    try:
        while True:
            while lb_heap and lb_heap[0][2].expanded:
                heappop(lb_heap)
            if not lb_heap:
                return Solution(Status.INFEASIBLE, hl_expanded=expanded)
            lbmin = lb_heap[0][0]
            if monotonic() > deadline:
                return Solution(Status.TIMEOUT, lower_bound=lbmin,
                                hl_expanded=expanded)
            thr = floor(w * lbmin)
            while cost_heap and cost_heap[0][0] <= thr:
                _, _, nd = heappop(cost_heap)
                heappush(focal, (nd.nconf, nd.order, nd))
            if not focal:
                raise RuntimeError("high-level focal underflow")
            _, _, node = heappop(focal)
            node.expanded = True
            expanded += 1
            if node.first is None:
                return Solution(Status.BOUNDED,
                                routes_from_indices(grid, node.routes),
                                cost=node.cost, lower_bound=lbmin, w=w,
                                hl_expanded=expanded)
            ci, cj, cidx = node.first
            v = node.routes[ci][cidx]
            for side in (ci, cj):
                if v == sidx[side] or v == gidx[side]:
                    continue
                banned = node.cons[side] | {v}
                occ = _occupied(node.routes, side)
                res = kern.focal(sidx[side], gidx[side], banned, w, occ,
                                 deadline)
                if res is None:
                    continue
                path, fmin = res
                # a child search can only tighten the bound for this pipe
                fmin = max(fmin, node.fmins[side])
                routes2 = node.routes[:side] + (path,) + node.routes[side + 1:]
                cost2 = node.cost - (len(node.routes[side]) - 1) + (len(path) - 1)
                nconf2, first2 = scan(routes2)
                child = _Node(routes2, node.cons[:side] + (banned,) + node.cons[side + 1:],
                              node.fmins[:side] + (fmin,) + node.fmins[side + 1:],
                              cost2, node.lb - node.fmins[side] + fmin,
                              nconf2, first2, counter)
                heappush(lb_heap, (child.lb, counter, child))
                if cost2 <= thr:
                    heappush(focal, (nconf2, counter, child))
                else:
                    heappush(cost_heap, (cost2, counter, child))
                counter += 1
    except SearchTimeout:
        return Solution(Status.TIMEOUT, lower_bound=lbmin, hl_expanded=expanded)
