from conftest import tiny_instances

from piperoute.cbs import Conflict, detect_conflicts, solve_cbs
from piperoute.grid import Coord, manhattan
from piperoute.instances import generate_empty, generate_obstacles
from piperoute.priority import load_fig_pbs
from piperoute.solution import Route, Status
from piperoute.validation import brute_force_optimal, validate_solution


def R(*cs):
    return Route(tuple(Coord(*c) for c in cs))


def test_detect_conflicts_examples():
    assert detect_conflicts([R((0, 0, 0), (1, 0, 0), (2, 0, 0)),
                             R((1, 1, 0), (1, 0, 0))]) == \
        (1, Conflict(0, 1, Coord(1, 0, 0)))
    # two shared cells: reported one is pipe 0's earliest
    assert detect_conflicts([R((0, 0, 0), (1, 0, 0), (2, 0, 0)),
                             R((2, 1, 0), (2, 0, 0), (1, 0, 0))]) == \
        (2, Conflict(0, 1, Coord(1, 0, 0)))
    # three pipes through one cell count as three pairs
    assert detect_conflicts([R((0, 0, 0), (5, 5, 5)), R((5, 5, 5), (1, 0, 0)),
                             R((9, 9, 9), (5, 5, 5))]) == \
        (3, Conflict(0, 1, Coord(5, 5, 5)))
    assert detect_conflicts([R((0, 0, 0)), R((1, 1, 1))]) == (0, None)


def test_crossing_3d_optimal(crossing_3d):
    res = solve_cbs(crossing_3d)
    assert res.status == Status.OPTIMAL
    assert res.cost == 6
    assert res.lower_bound == 6
    assert res.hl_expanded >= 1
    assert validate_solution(crossing_3d, res) == []
    assert detect_conflicts(res.routes) == (0, None)


def test_crossing_flat_infeasible(crossing_flat):
    res = solve_cbs(crossing_flat)
    assert res.status == Status.INFEASIBLE
    assert res.routes is None and res.cost is None
    assert not res.solved


def test_single_pipe_is_manhattan():
    inst = generate_empty((10, 8, 6), 1, 3)
    res = solve_cbs(inst)
    p = inst.pipes[0]
    assert res.cost == manhattan(p.start, p.goal)
    assert res.status == Status.OPTIMAL


def test_fig_fixture_optimum():
    res = solve_cbs(load_fig_pbs())
    assert res.status == Status.OPTIMAL
    assert res.cost == 16
    assert res.lower_bound == 16


def test_timeout_reports_lower_bound():
    res = solve_cbs(load_fig_pbs(), timeout=0.0)
    assert res.status == Status.TIMEOUT
    assert res.cost is None and res.routes is None
    assert isinstance(res.lower_bound, int)
    assert res.lower_bound >= 4


def test_matches_bruteforce_oracle():
    for inst in tiny_instances(60):
        cap = inst.grid.open_count - inst.k
        want = brute_force_optimal(inst, cost_cap=cap)
        got = solve_cbs(inst)
        assert got.status == want.status, inst.meta
        if want.solved:
            assert got.cost == want.cost, inst.meta
            assert validate_solution(inst, got) == []


def test_solved_routes_validate_on_bigger_grids():
    for seed in (1, 2, 3):
        inst = generate_obstacles((8, 8, 4), 4, 0.1, seed)
        res = solve_cbs(inst)
        assert res.status == Status.OPTIMAL
        assert res.lower_bound == res.cost
        assert validate_solution(inst, res) == []
        assert detect_conflicts(res.routes) == (0, None)


def test_deterministic():
    inst = generate_obstacles((6, 6, 3), 3, 0.15, 9)
    a = solve_cbs(inst)
    b = solve_cbs(inst)
    assert (a.status, a.cost, a.lower_bound, a.hl_expanded) == \
        (b.status, b.cost, b.lower_bound, b.hl_expanded)
    assert [r.vertices for r in a.routes] == [r.vertices for r in b.routes]
