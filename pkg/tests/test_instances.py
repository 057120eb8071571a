import math

import pytest

from piperoute.errors import (GenerationFailed, InvalidInstance,
                              InvalidSolution, TooManyPipes)
from piperoute.grid import Coord, Grid
from piperoute.instances import (Instance, Pipe, decode_instance,
                                 decode_solution, encode_instance,
                                 encode_solution, generate_empty,
                                 generate_obstacles)
from piperoute.solution import Route, Solution, Status


def test_generate_empty_endpoints():
    inst = generate_empty((20, 20, 20), 10, 1)
    eps = [c for p in inst.pipes for c in (p.start, p.goal)]
    assert len(eps) == 20
    assert len(set(eps)) == 20
    perimeter = set(inst.grid.perimeter_cells())
    assert all(c in perimeter for c in eps)
    assert [p.id for p in inst.pipes] == list(range(10))


def test_generate_empty_deterministic():
    a = encode_instance(generate_empty((20, 20, 20), 10, 9))
    b = encode_instance(generate_empty((20, 20, 20), 10, 9))
    assert a == b
    c = encode_instance(generate_empty((20, 20, 20), 10, 10))
    assert a != c


def test_generate_empty_too_many_pipes():
    with pytest.raises(TooManyPipes):
        generate_empty((2, 2, 2), 5, 1)


def test_obstacles_exact_blocked_count():
    for density, dims in ((0.10, (20, 20, 20)), (0.13, (7, 9, 11)), (0.34, (6, 6, 6))):
        inst = generate_obstacles(dims, 2, density, 5)
        want = math.ceil(density * dims[0] * dims[1] * dims[2])
        assert inst.grid.blocked_count == want


def test_obstacles_are_floor_columns():
    inst = generate_obstacles((8, 8, 8), 2, 0.2, 3)
    cells = set(inst.grid.blocked_cells())
    for c in cells:
        if c.z > 0:
            assert Coord(c.x, c.y, c.z - 1) in cells, "column has a gap"


def test_obstacles_density_zero_matches_empty():
    a = generate_obstacles((12, 10, 8), 4, 0.0, 77)
    b = generate_empty((12, 10, 8), 4, 77)
    assert a.grid == b.grid
    assert a.pipes == b.pipes


def test_obstacles_pipes_individually_routable():
    from piperoute.search import astar
    inst = generate_obstacles((20, 20, 20), 50, 0.10, 7)
    for p in inst.pipes:
        assert astar(inst.grid, p.start, p.goal) is not None


def test_obstacles_rejects_bad_density():
    with pytest.raises(GenerationFailed):
        generate_obstacles((5, 5, 5), 1, 1.0, 1)
    with pytest.raises(GenerationFailed):
        generate_obstacles((5, 5, 5), 1, -0.1, 1)


def test_generation_failed_when_unsatisfiable():
    # 0.95 density on a flat grid leaves endpoints scattered across sealed
    # pockets; the connectivity redraw budget must give up eventually
    with pytest.raises((GenerationFailed, TooManyPipes)):
        generate_obstacles((8, 8, 1), 3, 0.9, 123)


def test_roundtrip_generated():
    for seed in (1, 2, 3):
        inst = generate_obstacles((9, 7, 5), 3, 0.15, seed)
        text = encode_instance(inst)
        back = decode_instance(text)
        assert back.grid == inst.grid
        assert back.pipes == inst.pipes
        assert back.meta == inst.meta
        assert encode_instance(back) == text


def test_decode_rejects_malformed():
    good = ("dims 3 3 1\nblocked 1\n1 1 0\npipes 1\n0 0 0 2 2 0\n")
    assert decode_instance(good).k == 1
    bad_cases = [
        "dims 3 3\nblocked 0\npipes 0\n",            # short dims
        "dims 3 3 1\nblocked 2\n1 1 0\npipes 0\n",   # count mismatch
        "dims 3 3 1\nblocked 1\n5 5 5\npipes 0\n",   # blocked out of bounds
        "dims 3 3 1\nblocked 0\npipes 1\n0 0 0 0 0 0\n",   # start == goal
        "dims 3 3 1\nblocked 0\npipes 1\n0 0 0 9 0 0\n",   # endpoint oob
        "dims 3 3 1\nblocked 1\n0 0 0\npipes 1\n0 0 0 2 0 0\n",  # blocked endpoint
        "dims 3 3 1\nblocked 0\npipes 2\n0 0 0 2 0 0\n2 0 0 0 2 0\n",  # shared endpoint
        "dims 3 3 1\nblocked 0\npipes 1\n0 0 0 2 0 0\nextra\n",  # trailing junk
        "dims 3 3 1\nblocked 2\n1 1 0\n0 0 0\npipes 0\n",  # unsorted blocked
        "dims 3 3 1\nblocked 0\npipes 1\n0 0 x 2 0 0\n",   # non-integer
        "",
    ]
    for text in bad_cases:
        with pytest.raises(InvalidInstance):
            decode_instance(text)


def test_decode_rejects_interior_endpoint():
    text = "dims 3 3 3\nblocked 0\npipes 1\n1 1 1 0 0 0\n"
    with pytest.raises(InvalidInstance):
        decode_instance(text)


def test_meta_comment_roundtrip():
    inst = generate_obstacles((6, 6, 6), 2, 0.1, 4)
    text = encode_instance(inst)
    assert "# meta" in text
    assert decode_instance(text).meta["env"] == "obstacles"


def test_solution_codec_roundtrip():
    sol = Solution(Status.OPTIMAL,
                   [Route((Coord(0, 0, 0), Coord(1, 0, 0), Coord(2, 0, 0))),
                    Route((Coord(0, 1, 0), Coord(1, 1, 0)))],
                   cost=3, lower_bound=3)
    text = encode_solution(sol)
    back = decode_solution(text)
    assert back.cost == 3
    assert back.lower_bound == 3
    assert [r.vertices for r in back.routes] == [r.vertices for r in sol.routes]
    assert encode_solution(back) == text


def test_solution_codec_rejects_malformed():
    for text in [
        "",
        "cost 3\n",                                    # missing lb
        "lb 3\ncost 3\n",                              # wrong order
        "cost 3\nlb 3\n",                              # no routes
        "cost 3\nlb 3\nroute 1 2\n0 0 0\n1 0 0\n",     # ids must start at 0
        "cost 3\nlb 3\nroute 0 2\n0 0 0\n",            # vertex count short
        "cost 3\nlb 3\nroute 0 0\n",                   # empty route
        "cost x\nlb 3\nroute 0 1\n0 0 0\n",            # non-integer
    ]:
        with pytest.raises(InvalidSolution):
            decode_solution(text)


def test_encode_solution_requires_solved_fields():
    with pytest.raises(ValueError):
        encode_solution(Solution(Status.INFEASIBLE))
    with pytest.raises(ValueError):
        encode_solution(Solution(Status.OPTIMAL,
                                 [Route((Coord(0, 0, 0), Coord(1, 0, 0)))],
                                 cost=None, lower_bound=None))


def test_instance_validate_direct():
    grid = Grid((3, 3, 1), [])
    Instance(grid, [Pipe(0, Coord(0, 0, 0), Coord(2, 2, 0))]).validate()
    with pytest.raises(InvalidInstance):
        Instance(grid, [Pipe(0, Coord(0, 0, 0), Coord(0, 0, 0))]).validate()
