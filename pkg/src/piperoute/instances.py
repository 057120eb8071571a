"""Problem instances: grid + pipe endpoint pairs, generators and text codec.

Generation is reproducible byte-for-byte from (dims, k, density, seed) on any
platform: all randomness comes from the in-repo SplitMix64 generator, and
sampling is plain Fisher-Yates over deterministically ordered cell lists.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import ceil
from typing import Dict, List, NamedTuple, Optional, Tuple

from .errors import GenerationFailed, InvalidInstance, InvalidSolution, TooManyPipes
from .grid import Coord, Dims, Grid
from .rng import SplitMix64
from .search import make_kernel
from .solution import Route, Solution, Status

_RETRY_BUDGET = 1000  # endpoint-pair redraws per instance before giving up


class Pipe(NamedTuple):
    id: int
    start: Coord
    goal: Coord


@dataclass
class Instance:
    grid: Grid
    pipes: List[Pipe]
    meta: Dict[str, str] = field(default_factory=dict)

    @property
    def k(self) -> int:
        return len(self.pipes)

    def validate(self) -> None:
        """Raise InvalidInstance when an instance invariant is violated."""
        perimeter = set(self.grid.perimeter_cells())
        seen = {}
        for p in self.pipes:
            if p.start == p.goal:
                raise InvalidInstance(f"pipe {p.id}: start equals goal")
            for c in (p.start, p.goal):
                if not self.grid.in_bounds(c):
                    raise InvalidInstance(f"pipe {p.id}: endpoint {tuple(c)} out of bounds")
                if not self.grid.is_open(c):
                    raise InvalidInstance(f"pipe {p.id}: endpoint {tuple(c)} is blocked")
                if c not in perimeter:
                    raise InvalidInstance(f"pipe {p.id}: endpoint {tuple(c)} not on perimeter")
                if c in seen:
                    raise InvalidInstance(
                        f"pipes {seen[c]} and {p.id} share endpoint {tuple(c)}")
                seen[c] = p.id


# ---------------------------------------------------------------------------
# generators
# ---------------------------------------------------------------------------

def _draw_endpoints(pool: List[Coord], k: int, rng: SplitMix64,
                    connected=None) -> List[Pipe]:
    """Sample k (start, goal) pairs without replacement by Fisher-Yates steps.

    With `connected` given, a pair failing the check is moved to the back of
    the unconsumed region and redrawn; without rejections the draw sequence
    is identical to a plain prefix shuffle, so density-0 obstacle instances
    match empty instances exactly.
    """
    if 2 * k > len(pool):
        raise TooManyPipes(
            f"need {2 * k} open perimeter cells for {k} pipes, have {len(pool)}")
    arr = list(pool)
    n = len(arr)
    pipes: List[Pipe] = []
    i = 0
    retries = 0
    while len(pipes) < k:
        j = i + rng.below(n - i)
        arr[i], arr[j] = arr[j], arr[i]
        start = arr[i]
        i += 1
        j = i + rng.below(n - i)
        arr[i], arr[j] = arr[j], arr[i]
        goal = arr[i]
        i += 1
        if connected is None or connected(start, goal):
            pipes.append(Pipe(len(pipes), start, goal))
            continue
        retries += 1
        if retries > _RETRY_BUDGET:
            raise GenerationFailed(
                f"no connected endpoint pair for pipe {len(pipes)} "
                f"after {_RETRY_BUDGET} redraws")
        # return the rejected pair to the back of the live region
        del arr[i - 2:i]
        arr.extend((start, goal))
        i -= 2
    return pipes


def generate_empty(dims: Dims, k: int, seed: int) -> Instance:
    """Obstacle-free instance with 2k distinct perimeter endpoints."""
    grid = Grid(dims)
    rng = SplitMix64(seed)
    pipes = _draw_endpoints(grid.perimeter_cells(), k, rng)
    return Instance(grid, pipes, {"env": "empty", "seed": str(seed)})


def generate_obstacles(dims: Dims, k: int, density: float, seed: int) -> Instance:
    """Instance with vertical obstacle columns rising from the floor.

    Columns grow from z=0 at distinct floor cells to uniform heights in
    [1..Z] until exactly ceil(density * X * Y * Z) cells are blocked; the
    last column is truncated to land on the target.  Endpoints are drawn as
    in generate_empty from the open perimeter, redrawing any pair whose two
    cells are not connected in the obstacle grid.
    """
    if not 0.0 <= density < 1.0:
        raise GenerationFailed(f"density {density} outside [0, 1)")
    X, Y, Z = dims
    target = ceil(density * X * Y * Z)
    rng = SplitMix64(seed)

    blocked: List[Coord] = []
    origins = [(x, y) for x in range(X) for y in range(Y)]
    used = 0
    total = 0
    while total < target:
        if used == len(origins):
            raise GenerationFailed(
                f"floor columns exhausted at {total}/{target} blocked cells")
        j = used + rng.below(len(origins) - used)
        origins[used], origins[j] = origins[j], origins[used]
        ox, oy = origins[used]
        used += 1
        height = rng.randint(1, Z)
        height = min(height, target - total)
        for z in range(height):
            blocked.append(Coord(ox, oy, z))
        total += height

    grid = Grid(dims, blocked)
    connected = None
    if target > 0:
        kern = make_kernel(grid)
        index = grid.index
        connected = lambda a, b: kern.astar(index(a), index(b)) is not None
    pipes = _draw_endpoints(grid.perimeter_cells(), k, rng, connected)
    meta = {"env": "obstacles", "density": repr(float(density)), "seed": str(seed)}
    return Instance(grid, pipes, meta)


# ---------------------------------------------------------------------------
# text codec
# ---------------------------------------------------------------------------

def encode_instance(inst: Instance) -> str:
    """Line-oriented text form; blocked cells in lexicographic order."""
    lines = []
    X, Y, Z = inst.grid.dims
    lines.append(f"dims {X} {Y} {Z}")
    cells = inst.grid.blocked_cells()
    lines.append(f"blocked {len(cells)}")
    for c in cells:
        lines.append(f"{c.x} {c.y} {c.z}")
    lines.append(f"pipes {len(inst.pipes)}")
    for p in inst.pipes:
        s, g = p.start, p.goal
        lines.append(f"{s.x} {s.y} {s.z} {g.x} {g.y} {g.z}")
    if inst.meta:
        parts = " ".join(f"{k}={v}" for k, v in sorted(inst.meta.items()))
        lines.append(f"# meta {parts}")
    return "\n".join(lines) + "\n"


def _ints(line: str, n: int, what: str) -> List[int]:
    parts = line.split()
    if len(parts) != n:
        raise InvalidInstance(f"{what}: expected {n} fields, got {len(parts)!r} in {line!r}")
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise InvalidInstance(f"{what}: non-integer field in {line!r}") from None


def decode_instance(text: str) -> Instance:
    lines = [ln.strip() for ln in text.splitlines()]
    body = [ln for ln in lines if ln and not ln.startswith("#")]
    meta: Dict[str, str] = {}
    for ln in lines:
        if ln.startswith("# meta"):
            for tok in ln[len("# meta"):].split():
                if "=" not in tok:
                    raise InvalidInstance(f"malformed meta token {tok!r}")
                key, val = tok.split("=", 1)
                meta[key] = val

    pos = 0

    def take(what: str) -> str:
        nonlocal pos
        if pos >= len(body):
            raise InvalidInstance(f"unexpected end of input, wanted {what}")
        line = body[pos]
        pos += 1
        return line

    header = take("dims header")
    if not header.startswith("dims "):
        raise InvalidInstance(f"expected 'dims X Y Z', got {header!r}")
    X, Y, Z = _ints(header[5:], 3, "dims")
    if X < 1 or Y < 1 or Z < 1:
        raise InvalidInstance(f"non-positive dims {(X, Y, Z)}")

    header = take("blocked header")
    if not header.startswith("blocked "):
        raise InvalidInstance(f"expected 'blocked N', got {header!r}")
    (nblocked,) = _ints(header[8:], 1, "blocked count")
    if nblocked < 0:
        raise InvalidInstance("negative blocked count")
    cells: List[Coord] = []
    for _ in range(nblocked):
        x, y, z = _ints(take("blocked cell"), 3, "blocked cell")
        cells.append(Coord(x, y, z))
    if cells != sorted(cells):
        raise InvalidInstance("blocked cells not in lexicographic order")
    if len(set(cells)) != len(cells):
        raise InvalidInstance("duplicate blocked cell")

    header = take("pipes header")
    if not header.startswith("pipes "):
        raise InvalidInstance(f"expected 'pipes K', got {header!r}")
    (npipes,) = _ints(header[6:], 1, "pipe count")
    if npipes < 0:
        raise InvalidInstance("negative pipe count")
    pipes: List[Pipe] = []
    for i in range(npipes):
        sx, sy, sz, gx, gy, gz = _ints(take("pipe endpoints"), 6, "pipe endpoints")
        pipes.append(Pipe(i, Coord(sx, sy, sz), Coord(gx, gy, gz)))
    if pos != len(body):
        raise InvalidInstance(f"trailing content: {body[pos]!r}")

    try:
        grid = Grid((X, Y, Z), cells)
    except ValueError as e:
        raise InvalidInstance(str(e)) from None
    inst = Instance(grid, pipes, meta)
    inst.validate()
    return inst


def load_instance(path) -> Instance:
    with open(path, "r", encoding="utf-8") as fh:
        return decode_instance(fh.read())


def save_instance(inst: Instance, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(encode_instance(inst))


def encode_solution(sol: Solution) -> str:
    """Text form of a solved Solution: cost, lower bound, then each route."""
    if not sol.routes:
        raise ValueError("cannot encode a solution without routes")
    if sol.cost is None or sol.lower_bound is None:
        raise ValueError("cannot encode a solution without cost and lower bound")
    lines = [f"cost {sol.cost}", f"lb {sol.lower_bound}"]
    for k, route in enumerate(sol.routes):
        lines.append(f"route {k} {len(route.vertices)}")
        for v in route.vertices:
            lines.append(f"{v.x} {v.y} {v.z}")
    return "\n".join(lines) + "\n"


def decode_solution(text: str) -> Solution:
    """Parse a solution file.

    Files carry routes and claimed bounds but no provenance, so the result
    gets status heuristic; run the validator to establish feasibility.
    """
    body = [ln.strip() for ln in text.splitlines() if ln.strip() and not ln.strip().startswith("#")]
    pos = 0

    def take(what: str) -> str:
        nonlocal pos
        if pos >= len(body):
            raise InvalidSolution(f"unexpected end of input, wanted {what}")
        line = body[pos]
        pos += 1
        return line

    def ints(line: str, n: int, what: str) -> List[int]:
        parts = line.split()
        if len(parts) != n:
            raise InvalidSolution(f"{what}: expected {n} fields in {line!r}")
        try:
            return [int(p) for p in parts]
        except ValueError:
            raise InvalidSolution(f"{what}: non-integer field in {line!r}") from None

    header = take("cost line")
    if not header.startswith("cost "):
        raise InvalidSolution(f"expected 'cost C', got {header!r}")
    (cost,) = ints(header[5:], 1, "cost")
    header = take("lb line")
    if not header.startswith("lb "):
        raise InvalidSolution(f"expected 'lb L', got {header!r}")
    (lb,) = ints(header[3:], 1, "lower bound")

    routes: List[Route] = []
    while pos < len(body):
        header = take("route header")
        if not header.startswith("route "):
            raise InvalidSolution(f"expected 'route k M', got {header!r}")
        k, m = ints(header[6:], 2, "route header")
        if k != len(routes):
            raise InvalidSolution(f"route ids must be 0..K-1 in order, got {k}")
        if m < 1:
            raise InvalidSolution(f"route {k} has no vertices")
        verts = []
        for _ in range(m):
            x, y, z = ints(take(f"route {k} vertex"), 3, "vertex")
            verts.append(Coord(x, y, z))
        routes.append(Route(tuple(verts)))
    if not routes:
        raise InvalidSolution("no routes")
    return Solution(Status.HEURISTIC, tuple(routes), cost=cost, lower_bound=lb)


def load_solution(path) -> Solution:
    with open(path, "r", encoding="utf-8") as fh:
        return decode_solution(fh.read())


def save_solution(sol: Solution, path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(encode_solution(sol))
