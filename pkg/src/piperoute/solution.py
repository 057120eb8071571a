"""Route and solution containers shared by the solvers, validator and CLI."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

from .grid import Coord


class Status:
    """Solution status vocabulary."""

    OPTIMAL = "optimal"
    BOUNDED = "bounded"      # cost <= w * lower_bound, w carried on the solution
    HEURISTIC = "heuristic"  # prioritized baseline: feasible, no quality bound
    INFEASIBLE = "infeasible"
    TIMEOUT = "timeout"

    SOLVED = (OPTIMAL, BOUNDED, HEURISTIC)


@dataclass(frozen=True)
class Route:
    """A pipe's route: consecutive vertices, 6-adjacent, pairwise distinct."""

    vertices: Tuple[Coord, ...]

    @property
    def cost(self) -> int:
        return len(self.vertices) - 1

    def __len__(self) -> int:
        return len(self.vertices)


@dataclass
class Solution:
    status: str
    routes: Optional[List[Route]] = None
    cost: Optional[int] = None
    lower_bound: Optional[int] = None
    w: Optional[float] = None
    hl_expanded: int = 0

    @property
    def solved(self) -> bool:
        return self.status in Status.SOLVED


@dataclass(frozen=True)
class OrderFailed:
    """Prioritized planning dead-ended: `pipe` had no route under this order."""

    pipe: int
    order: Tuple[int, ...] = field(default=())


def routes_from_indices(grid, index_routes: Sequence[Sequence[int]]) -> List[Route]:
    """Convert solver-internal linear-index routes to coordinate routes."""
    return [Route(tuple(grid.coord(i) for i in r)) for r in index_routes]
