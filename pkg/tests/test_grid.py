import pytest

from piperoute.grid import MAX_CELLS, NEIGHBOR_DELTAS, Coord, Grid, manhattan


def test_manhattan_examples():
    assert manhattan(Coord(0, 0, 0), Coord(2, 3, 4)) == 9
    assert manhattan(Coord(5, 5, 5), Coord(5, 5, 5)) == 0


def test_manhattan_symmetric():
    a, b = Coord(1, 7, 2), Coord(4, 0, 9)
    assert manhattan(a, b) == manhattan(b, a)


def test_neighbor_order_is_fixed():
    # +x, -x, +y, -y, +z, -z; solvers and the oracle rely on this order
    assert NEIGHBOR_DELTAS == ((1, 0, 0), (-1, 0, 0), (0, 1, 0),
                               (0, -1, 0), (0, 0, 1), (0, 0, -1))


def test_index_coord_roundtrip():
    g = Grid((4, 5, 3), [])
    seen = set()
    for i in range(g.size):
        c = g.coord(i)
        assert g.index(c) == i
        seen.add(c)
    assert len(seen) == 60


def test_neighbors_clip_bounds_and_blocked():
    g = Grid((2, 2, 1), [Coord(1, 1, 0)])
    assert list(g.neighbors(Coord(0, 0, 0))) == [Coord(1, 0, 0), Coord(0, 1, 0)]
    # +x first when open
    g2 = Grid((2, 2, 1), [])
    assert list(g2.neighbors(Coord(0, 0, 0)))[0] == Coord(1, 0, 0)


def test_blocked_predicates():
    g = Grid((3, 3, 3), [Coord(1, 1, 1)])
    assert not g.is_open(Coord(1, 1, 1))
    assert g.is_open(Coord(0, 0, 0))
    assert not g.is_open(Coord(-1, 0, 0))
    assert not g.in_bounds(Coord(3, 0, 0))
    assert g.blocked_count == 1
    assert g.open_count == 26
    assert g.blocked_cells() == [Coord(1, 1, 1)]


def test_perimeter_small_box():
    g = Grid((3, 3, 3), [])
    per = g.perimeter_cells()
    assert len(per) == 26  # everything but the center
    assert Coord(1, 1, 1) not in per
    assert per == sorted(per)


def test_perimeter_flat_grid_is_everything():
    g = Grid((3, 3, 1), [])
    assert len(g.perimeter_cells()) == 9


def test_perimeter_skips_blocked():
    g = Grid((3, 3, 1), [Coord(0, 0, 0)])
    per = g.perimeter_cells()
    assert Coord(0, 0, 0) not in per
    assert len(per) == 8


def test_grid_equality_and_hash():
    a = Grid((3, 3, 1), [Coord(1, 1, 0)])
    b = Grid((3, 3, 1), [Coord(1, 1, 0)])
    c = Grid((3, 3, 1), [])
    assert a == b and hash(a) == hash(b)
    assert a != c


def test_grid_rejects_bad_cells():
    with pytest.raises(ValueError):
        Grid((2, 2, 1), [Coord(2, 0, 0)])
    with pytest.raises(ValueError):
        Grid((0, 2, 1), [])


def test_grid_rejects_too_many_cells():
    big = MAX_CELLS  # 2^26 cells; one more than the kernels can address
    with pytest.raises(ValueError):
        Grid((big, 2, 1), [])
