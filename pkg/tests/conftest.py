"""Shared builders for hand-made instances used across test modules."""

import pytest

from piperoute.grid import Coord, Grid
from piperoute.instances import Instance, Pipe


def make_instance(dims, blocked, pipes):
    """Instance from dims, blocked coordinate triples, and endpoint pairs."""
    grid = Grid(dims, [Coord(*c) for c in blocked])
    ps = [Pipe(i, Coord(*s), Coord(*g)) for i, (s, g) in enumerate(pipes)]
    return Instance(grid, ps)


@pytest.fixture
def crossing_3d():
    """Two crossing pipes on 3x3x2; joint optimum 6 (one detours up)."""
    return make_instance((3, 3, 2), [],
                         [((0, 1, 0), (2, 1, 0)), ((1, 0, 0), (1, 2, 0))])


@pytest.fixture
def crossing_flat():
    """Same crossing on 3x3x1: no third dimension, jointly infeasible."""
    return make_instance((3, 3, 1), [],
                         [((0, 1, 0), (2, 1, 0)), ((1, 0, 0), (1, 2, 0))])


def tiny_instances(count, start_seed=1):
    """Deterministic stream of tiny generated instances (<= 4x4x2, K <= 3)."""
    from piperoute.errors import GenerationFailed, TooManyPipes
    from piperoute.instances import generate_empty, generate_obstacles

    dims_pool = [(3, 3, 1), (4, 3, 1), (4, 4, 1), (2, 2, 2), (3, 3, 2),
                 (4, 3, 2), (4, 4, 2)]
    out = []
    seed = start_seed
    while len(out) < count:
        dims = dims_pool[seed % len(dims_pool)]
        k = 1 + (seed % 3)
        density = (0.0, 0.15, 0.25)[seed % 3] if seed % 2 else 0.0
        try:
            if density:
                inst = generate_obstacles(dims, k, density, seed)
            else:
                inst = generate_empty(dims, k, seed)
            out.append(inst)
        except (TooManyPipes, GenerationFailed):
            pass
        seed += 1
    return out
