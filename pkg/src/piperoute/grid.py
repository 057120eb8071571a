"""Axis-aligned 3D grid with unit cells and 6-neighbor connectivity.

Cells are addressed by integer coordinates (x, y, z) with 0 <= x < X etc.
Linear cell index is x + X*(y + Y*z); the blocked mask is a dense bytes
object in that order so both search backends can share it without copying.
"""

from __future__ import annotations

from typing import Iterable, Iterator, List, NamedTuple, Tuple


class Coord(NamedTuple):
    x: int
    y: int
    z: int


Dims = Tuple[int, int, int]

# Neighbor offsets in fixed order: +x, -x, +y, -y, +z, -z.  Search tie-breaking
# and route reconstruction depend on this order; do not reorder.
NEIGHBOR_DELTAS = (
    (1, 0, 0),
    (-1, 0, 0),
    (0, 1, 0),
    (0, -1, 0),
    (0, 0, 1),
    (0, 0, -1),
)

# Compiled kernel packs (f, g, cell) triples into fixed-width integer keys and
# assumes cell indices fit in 26 bits.
MAX_CELLS = 1 << 26


def manhattan(a: Coord, b: Coord) -> int:
    return abs(a[0] - b[0]) + abs(a[1] - b[1]) + abs(a[2] - b[2])


class Grid:
    """Immutable grid: dimensions plus a dense blocked mask."""

    __slots__ = ("dims", "_blocked")

    def __init__(self, dims: Dims, blocked: Iterable[Coord] = ()):
        x, y, z = dims
        if x < 1 or y < 1 or z < 1:
            raise ValueError("grid dimensions must be positive")
        if x * y * z > MAX_CELLS:
            raise ValueError(f"grid exceeds {MAX_CELLS} cells")
        self.dims = (int(x), int(y), int(z))
        mask = bytearray(x * y * z)
        for c in blocked:
            if not self.in_bounds(c):
                raise ValueError(f"blocked cell {tuple(c)} out of bounds for dims {self.dims}")
            mask[self.index(c)] = 1
        self._blocked = bytes(mask)

    # -- addressing --------------------------------------------------------

    def index(self, c: Coord) -> int:
        X, Y, _ = self.dims
        return c[0] + X * (c[1] + Y * c[2])

    def coord(self, i: int) -> Coord:
        X, Y, _ = self.dims
        x = i % X
        rest = i // X
        return Coord(x, rest % Y, rest // Y)

    @property
    def size(self) -> int:
        X, Y, Z = self.dims
        return X * Y * Z

    @property
    def blocked_mask(self) -> bytes:
        return self._blocked

    def blocked_cells(self) -> List[Coord]:
        """Blocked cells in lexicographic (x, y, z) order."""
        return sorted(self.coord(i) for i, b in enumerate(self._blocked) if b)

    @property
    def blocked_count(self) -> int:
        return sum(self._blocked)

    @property
    def open_count(self) -> int:
        return self.size - self.blocked_count

    # -- predicates --------------------------------------------------------

    def in_bounds(self, c: Coord) -> bool:
        X, Y, Z = self.dims
        return 0 <= c[0] < X and 0 <= c[1] < Y and 0 <= c[2] < Z

    def is_open(self, c: Coord) -> bool:
        return self.in_bounds(c) and not self._blocked[self.index(c)]

    # -- traversal ---------------------------------------------------------

    def neighbors(self, c: Coord) -> Iterator[Coord]:
        """Open in-bounds neighbors, in the fixed +x,-x,+y,-y,+z,-z order."""
        for dx, dy, dz in NEIGHBOR_DELTAS:
            n = Coord(c[0] + dx, c[1] + dy, c[2] + dz)
            if self.is_open(n):
                yield n

    def perimeter_cells(self) -> List[Coord]:
        """Open cells on the grid's outer shell, in lexicographic order.

        A cell is on the shell when any coordinate sits on a face:
        x in {0, X-1}, y in {0, Y-1} or z in {0, Z-1}.
        """
        X, Y, Z = self.dims
        out = []
        for x in range(X):
            x_face = x == 0 or x == X - 1
            for y in range(Y):
                xy_face = x_face or y == 0 or y == Y - 1
                for z in range(Z):
                    if xy_face or z == 0 or z == Z - 1:
                        c = Coord(x, y, z)
                        if not self._blocked[self.index(c)]:
                            out.append(c)
        return out

    # -- equality ----------------------------------------------------------

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Grid)
            and self.dims == other.dims
            and self._blocked == other._blocked
        )

    def __hash__(self) -> int:
        return hash((self.dims, self._blocked))

    def __repr__(self) -> str:
        return f"Grid(dims={self.dims}, blocked={self.blocked_count})"
