"""Single-pipe shortest-path searches.

The hot loops live in a compiled extension (`_speedups`) with a pure-Python
twin (`_fallback`); the import below picks the compiled one when available.
Set PIPEROUTE_BACKEND=python or =cython to force a choice.  Both produce
identical routes; see benchmarks/compare_backends.py for the speed gap.
"""

from __future__ import annotations

import os
from typing import Iterable, Optional, Tuple

from .errors import SearchTimeout  # noqa: F401  (re-exported for callers)
from .grid import Coord, Grid, manhattan  # noqa: F401
from .solution import Route

_choice = os.environ.get("PIPEROUTE_BACKEND", "").strip().lower()
if _choice == "python":
    from . import _fallback as backend
elif _choice == "cython":
    from . import _speedups as backend  # type: ignore[no-redef]
elif _choice == "":
    try:
        from . import _speedups as backend  # type: ignore[no-redef]
    except ImportError:
        from . import _fallback as backend  # type: ignore[no-redef]
else:
    raise RuntimeError(f"unknown PIPEROUTE_BACKEND {_choice!r}")


def backend_name() -> str:
    return backend.BACKEND


def make_kernel(grid: Grid):
    """A reusable search kernel bound to one grid."""
    return backend.Kernel(grid.dims, grid.blocked_mask)


def _to_route(grid: Grid, path) -> Route:
    return Route(tuple(grid.coord(i) for i in path))


def astar(
    grid: Grid,
    start: Coord,
    goal: Coord,
    constraints: Iterable[Coord] = (),
    deadline: Optional[float] = None,
) -> Optional[Route]:
    """Minimum-cost route from start to goal avoiding blocked cells and
    constrained vertices; None when no route exists.

    Ties resolve deterministically: smaller f, then larger g, then the fixed
    +x,-x,+y,-y,+z,-z neighbor order via push order.
    """
    kern = make_kernel(grid)
    banned = frozenset(grid.index(c) for c in constraints)
    path = kern.astar(grid.index(start), grid.index(goal), banned, deadline)
    return None if path is None else _to_route(grid, path)


def focal_astar(
    grid: Grid,
    start: Coord,
    goal: Coord,
    constraints: Iterable[Coord],
    w: float,
    occupied: Iterable[Coord],
    deadline: Optional[float] = None,
) -> Optional[Tuple[Route, int]]:
    """Bounded-suboptimal route: cost <= w * fmin, steering around cells in
    `occupied` (other pipes' current routes).  Returns (route, fmin); fmin is
    read from OPEN at termination and is a lower bound on the constrained
    optimum.  None when no route exists.
    """
    if w < 1.0:
        raise ValueError("w must be >= 1")
    kern = make_kernel(grid)
    banned = frozenset(grid.index(c) for c in constraints)
    occ = [grid.index(c) for c in occupied]
    res = kern.focal(grid.index(start), grid.index(goal), banned, w, occ, deadline)
    if res is None:
        return None
    path, fmin = res
    return _to_route(grid, path), fmin
