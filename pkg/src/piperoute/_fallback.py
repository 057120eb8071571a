"""Pure-Python search kernels.

Reference implementation of the hot inner loops; `_speedups.pyx` mirrors it
operation for operation.  Both backends must expand nodes in exactly the same
order and return identical routes, so every container here has a fully
deterministic total order:

  astar OPEN entries  sort by (f asc, g desc, push order)
  focal FOCAL entries sort by (occupied-visit count asc, f asc, g desc, push order)

The focal search keeps per-f live-entry counts so fmin (the smallest f in
OPEN) can be read off cheaply; fmin never decreases because the heuristic is
consistent, so FOCAL is filled by draining f-buckets as the w*fmin threshold
rises.  Entries are lazily invalidated: an entry is live while its g matches
the best known g for its cell and the cell has not been expanded at that g.
A cell is re-expanded when a strictly better g is found later, which keeps
fmin a true lower bound on the constrained optimum.
"""

from __future__ import annotations

import math
from array import array
from heapq import heappop, heappush
from time import monotonic
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import SearchTimeout

BACKEND = "python"

_INF = float("inf")
_DEADLINE_STRIDE = 4096  # expansions between clock checks
_MAX_SCAN_ROUTES = 1024  # conflict scan packs pipe ids into 10 bits


class Kernel:
    """Single-pipe searches over one grid; reusable across many calls."""

    def __init__(self, dims: Tuple[int, int, int], blocked: bytes):
        self.X, self.Y, self.Z = dims
        self.blocked = blocked
        self.n = self.X * self.Y * self.Z
        if len(blocked) != self.n:
            raise ValueError("blocked mask size does not match dims")

    # -- helpers -----------------------------------------------------------

    def _h_parts(self, goal: int):
        X, Y = self.X, self.Y
        gx = goal % X
        rest = goal // X
        return gx, rest % Y, rest // Y

    def _neighbors(self, v: int) -> List[int]:
        # fixed order: +x, -x, +y, -y, +z, -z
        X, Y, Z = self.X, self.Y, self.Z
        x = v % X
        rest = v // X
        y = rest % Y
        z = rest // Y
        out = []
        if x + 1 < X:
            out.append(v + 1)
        if x > 0:
            out.append(v - 1)
        if y + 1 < Y:
            out.append(v + X)
        if y > 0:
            out.append(v - X)
        if z + 1 < Z:
            out.append(v + X * Y)
        if z > 0:
            out.append(v - X * Y)
        return out

    def _manhattan_to(self, v: int, gx: int, gy: int, gz: int) -> int:
        X, Y = self.X, self.Y
        x = v % X
        rest = v // X
        return abs(x - gx) + abs(rest % Y - gy) + abs(rest // Y - gz)

    def _rebuild(self, par: Dict[int, int], goal: int) -> array:
        path = [goal]
        v = goal
        while par[v] >= 0:
            v = par[v]
            path.append(v)
        path.reverse()
        return array("i", path)

    # -- plain A* ----------------------------------------------------------

    def astar(
        self,
        start: int,
        goal: int,
        banned=frozenset(),
        deadline: Optional[float] = None,
    ) -> Optional[array]:
        """Min-cost route from start to goal avoiding blocked and banned cells.

        Returns linear indices, or None when no route exists.
        """
        blocked = self.blocked
        if blocked[start] or blocked[goal] or start in banned or goal in banned:
            return None
        if start == goal:
            return array("i", [start])
        gx, gy, gz = self._h_parts(goal)

        g: Dict[int, int] = {start: 0}
        xg: Dict[int, int] = {}
        par: Dict[int, int] = {start: -1}
        ev: List[int] = [start]
        eg: List[int] = [0]
        heap: List[Tuple[int, int, int]] = []
        heappush(heap, (self._manhattan_to(start, gx, gy, gz), 0, 0))
        expansions = 0

        while heap:
            f, neg_g, eid = heappop(heap)
            v = ev[eid]
            gv = eg[eid]
            if gv != g.get(v) or xg.get(v, _INF) <= gv:
                continue
            xg[v] = gv
            expansions += 1
            if (expansions & (_DEADLINE_STRIDE - 1)) == 0 and deadline is not None:
                if monotonic() > deadline:
                    raise SearchTimeout()
            if v == goal:
                return self._rebuild(par, goal)
            g2 = gv + 1
            for u in self._neighbors(v):
                if blocked[u] or u in banned:
                    continue
                if g2 < g.get(u, self.n + 1):
                    g[u] = g2
                    par[u] = v
                    eid2 = len(ev)
                    ev.append(u)
                    eg.append(g2)
                    heappush(heap, (g2 + self._manhattan_to(u, gx, gy, gz), -g2, eid2))
        return None

    # -- focal A* ----------------------------------------------------------

    def focal(
        self,
        start: int,
        goal: int,
        banned,
        w: float,
        occupied: Sequence[int],
        deadline: Optional[float] = None,
    ) -> Optional[Tuple[array, int]]:
        """Bounded-suboptimal route: cost <= w * fmin, preferring cells not
        in `occupied` (cells used by other pipes' current routes).

        Returns (route, fmin) where fmin is the smallest f in OPEN at
        termination, a lower bound on the constrained optimum; or None.
        """
        blocked = self.blocked
        if blocked[start] or blocked[goal] or start in banned or goal in banned:
            return None
        if start == goal:
            return array("i", [start]), 0
        gx, gy, gz = self._h_parts(goal)
        occ = set(occupied)

        g: Dict[int, int] = {}
        xg: Dict[int, int] = {}
        par: Dict[int, int] = {}
        ev: List[int] = []
        eg: List[int] = []
        en: List[int] = []  # occupied visits along the entry's partial path
        bucket: Dict[int, List[int]] = {}  # f -> entry ids awaiting FOCAL eligibility
        live: Dict[int, int] = {}  # f -> live entry count (OPEN membership)
        focal: List[Tuple[int, int, int, int]] = []
        total_live = 0
        expansions = 0

        def live_entry(eid: int) -> bool:
            v = ev[eid]
            return eg[eid] == g.get(v) and xg.get(v, _INF) > eg[eid]

        def push(v: int, gv: int, nv: int, parent: int) -> None:
            nonlocal total_live
            g[v] = gv
            par[v] = parent
            eid = len(ev)
            ev.append(v)
            eg.append(gv)
            en.append(nv)
            f = gv + self._manhattan_to(v, gx, gy, gz)
            live[f] = live.get(f, 0) + 1
            total_live += 1
            if f <= thr:
                heappush(focal, (nv, f, -gv, eid))
            else:
                bucket.setdefault(f, []).append(eid)

        fmin = self._manhattan_to(start, gx, gy, gz)
        thr = math.floor(w * fmin)
        push(start, 0, 1 if start in occ else 0, -1)

        while total_live > 0:
            while live.get(fmin, 0) == 0:
                fmin += 1
            new_thr = math.floor(w * fmin)
            if new_thr > thr:
                for f in range(thr + 1, new_thr + 1):
                    ids = bucket.pop(f, None)
                    if ids:
                        for eid in ids:
                            if live_entry(eid):
                                heappush(focal, (en[eid], f, -eg[eid], eid))
                thr = new_thr

            eid = -1
            while focal:
                _, _, _, cand = heappop(focal)
                if live_entry(cand):
                    eid = cand
                    break
            if eid < 0:
                raise RuntimeError("focal underflow: live entries exist but none eligible")

            v = ev[eid]
            gv = eg[eid]
            f = gv + self._manhattan_to(v, gx, gy, gz)
            xg[v] = gv
            live[f] -= 1
            total_live -= 1
            expansions += 1
            if (expansions & (_DEADLINE_STRIDE - 1)) == 0 and deadline is not None:
                if monotonic() > deadline:
                    raise SearchTimeout()
            if v == goal:
                return self._rebuild(par, goal), fmin

            g2 = gv + 1
            for u in self._neighbors(v):
                if blocked[u] or u in banned:
                    continue
                old = g.get(u)
                if old is None or g2 < old:
                    if old is not None and xg.get(u, _INF) > old:
                        # strictly better path: the previous entry goes stale
                        live[old + self._manhattan_to(u, gx, gy, gz)] -= 1
                        total_live -= 1
                    push(u, g2, en[eid] + (1 if u in occ else 0), v)
        return None


def conflict_scan(routes: Sequence[Sequence[int]]):
    """Count (pipe pair, vertex) collisions and find the first one.

    Returns (count, (i, j, index of vertex along pipe i) or None), where the
    reported conflict is lexicographically smallest in (i, j, index).
    """
    if len(routes) >= _MAX_SCAN_ROUTES:
        raise ValueError("too many routes for conflict scan")
    counts: Dict[int, int] = {}
    for r in routes:
        for v in r:
            counts[v] = counts.get(v, 0) + 1
    total = 0
    for m in counts.values():
        if m > 1:
            total += m * (m - 1) // 2
    if total == 0:
        return 0, None

    users: Dict[int, List[int]] = {}
    for i, r in enumerate(routes):
        for v in r:
            if counts[v] > 1:
                users.setdefault(v, []).append(i)
    for i, r in enumerate(routes):
        best = None
        for idx, v in enumerate(r):
            if counts[v] > 1:
                for j in users[v]:
                    if j > i and (best is None or (j, idx) < best):
                        best = (j, idx)
        if best is not None:
            return total, (i, best[0], best[1])
    raise RuntimeError("conflict count positive but no ordered pair found")
