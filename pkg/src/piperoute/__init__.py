"""Vertex-disjoint pipe routing on unit-cost 3D grids.

Solvers: optimal conflict-based search, bounded-suboptimal focal variant,
and a prioritized baseline; plus instance generators, codecs, a validator
with an exhaustive oracle, and a benchmark harness.  Hot search kernels run
from a compiled extension when available, with a pure-Python fallback
(select explicitly via the PIPEROUTE_BACKEND environment variable).
"""

from .bench import (RunRecord, SuiteConfig, best_known_bound, instance_seed,
                    load_config, parse_config, quality_ratio, read_records,
                    run_suite, runtime_profile, success_rate)
from .cbs import Conflict, detect_conflicts, solve_cbs
from .ecbs import solve_ecbs
from .errors import (CapExceeded, GenerationFailed, InvalidInstance,
                     InvalidSolution, PipeRouteError, TooManyPipes)
from .grid import Coord, Grid, manhattan
from .instances import (Instance, Pipe, decode_instance, decode_solution,
                        encode_instance, encode_solution, generate_empty,
                        generate_obstacles, load_instance, load_solution,
                        save_instance, save_solution)
from .priority import fig_pbs_path, load_fig_pbs, solve_prioritized
from .search import astar, backend_name, focal_astar
from .solution import OrderFailed, Route, Solution, Status
from .validation import Violation, brute_force_optimal, validate_solution

__version__ = "0.1.0"

__all__ = [
    "CapExceeded", "Conflict", "Coord", "GenerationFailed", "Grid",
    "Instance", "InvalidInstance", "InvalidSolution", "OrderFailed", "Pipe",
    "PipeRouteError", "Route", "RunRecord", "Solution", "Status",
    "SuiteConfig", "TooManyPipes", "Violation", "astar", "backend_name",
    "best_known_bound", "brute_force_optimal", "decode_instance",
    "decode_solution", "detect_conflicts", "encode_instance",
    "encode_solution", "fig_pbs_path", "focal_astar", "generate_empty",
    "generate_obstacles", "instance_seed", "load_config", "load_fig_pbs",
    "load_instance", "load_solution", "manhattan", "parse_config",
    "quality_ratio", "read_records", "run_suite", "runtime_profile",
    "save_instance", "save_solution", "solve_cbs", "solve_ecbs",
    "solve_prioritized", "success_rate", "validate_solution",
]
