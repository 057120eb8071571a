"""Prioritized planning: route pipes one at a time in a fixed order.

Each pipe gets a shortest route avoiding everything already committed:
cells used by earlier routes plus the endpoints of pipes not yet routed.
Fast, but incomplete; a feasible instance can fail under every order.  The
bundled two-pipe fixture (see fig_pbs_path) demonstrates this: both orders
fail while an optimal joint solution of cost 16 exists.
"""

from __future__ import annotations

from importlib import resources
from time import monotonic
from typing import Optional, Sequence, Tuple, Union

from .errors import SearchTimeout
from .grid import manhattan
from .instances import Instance, decode_instance
from .search import make_kernel
from .solution import OrderFailed, Solution, Status, routes_from_indices

DEFAULT_TIMEOUT = 100.0


def solve_prioritized(inst: Instance, order: Optional[Sequence[int]] = None,
                      timeout: float = DEFAULT_TIMEOUT) -> Union[Solution, OrderFailed]:
    """Route pipes greedily in the given order (pipe ids, default 0..k-1).

    Returns a heuristic solution whose lower_bound is the sum of endpoint
    manhattan distances, or OrderFailed naming the first pipe left without
    a route.  No optimality guarantee of any kind.
    """
    k = inst.k
    if order is None:
        order = tuple(range(k))
    else:
        order = tuple(order)
        if sorted(order) != list(range(k)):
            raise ValueError("order must be a permutation of pipe ids")
    grid = inst.grid
    deadline = monotonic() + timeout
    kern = make_kernel(grid)
    sidx = {p.id: grid.index(p.start) for p in inst.pipes}
    gidx = {p.id: grid.index(p.goal) for p in inst.pipes}

    pending = set(sidx.values()) | set(gidx.values())
    used: set = set()
    paths = {}
    try:
        for pid in order:
            pending.discard(sidx[pid])
            pending.discard(gidx[pid])
            path = kern.astar(sidx[pid], gidx[pid],
                              frozenset(used | pending), deadline)
            if path is None:
                return OrderFailed(pipe=pid, order=order)
            paths[pid] = path
            used.update(path)
    except SearchTimeout:
        return Solution(Status.TIMEOUT,
                        lower_bound=sum(manhattan(p.start, p.goal)
                                        for p in inst.pipes))
    routes = tuple(paths[i] for i in range(k))
    return Solution(Status.HEURISTIC, routes_from_indices(grid, routes),
                    cost=sum(len(r) - 1 for r in routes),
                    lower_bound=sum(manhattan(p.start, p.goal)
                                    for p in inst.pipes))


def fig_pbs_path():
    """Filesystem path of the bundled two-pipe counterexample instance."""
    return resources.files("piperoute").joinpath("data/fig_pbs.inst")


def load_fig_pbs() -> Instance:
    """The bundled instance on which every priority order fails.

    Two pipes start and end at the bottoms of four chimney columns through a
    two-layer slab.  Whichever pipe routes first takes a unique shortest
    route that seals the other pipe in, yet a joint solution of cost 16
    exists (each pipe crossing over the slab).
    """
    return decode_instance(fig_pbs_path().read_text(encoding="utf-8"))
