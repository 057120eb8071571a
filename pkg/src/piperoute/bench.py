"""Benchmark harness: suites over environments, pipe counts, and seeds.

A suite config names an environment, a pipe-count ramp, repetitions,
timeout, algorithms, and a base seed.  Every (pipe count, repetition) pair
maps to one instance seed through a fixed hash, so all algorithms solve
identical instances and reruns are reproducible anywhere.  Records stream
to CSV as they finish; rerunning with the same output file skips work
already recorded there.
"""

from __future__ import annotations

import csv
import os
import re
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from time import monotonic
from typing import Dict, List, Optional, Sequence, Tuple

from .cbs import solve_cbs
from .ecbs import solve_ecbs
from .instances import Instance, generate_empty, generate_obstacles
from .priority import solve_prioritized
from .rng import mix64
from .solution import OrderFailed, Status
from .validation import validate_solution

CSV_HEADER = ["env", "dimx", "dimy", "dimz", "k", "seed", "algo", "w",
              "status", "cost", "lb", "runtime_s", "hl_expanded"]

_ALGO_RE = re.compile(r"^(cbs|priority|ecbs)(?:\(([0-9.]+)\))?$")


@dataclass(frozen=True)
class SuiteConfig:
    env: str                       # "empty" | "obstacles"
    dims: Tuple[int, int, int]
    density: float                 # used only by the obstacles env
    k_start: int
    k_step: int
    k_max: int
    instances: int                 # repetitions per pipe count
    timeout: float
    algos: Tuple[Tuple[str, Optional[float]], ...]   # (name, w)
    seed: int


@dataclass
class RunRecord:
    env: str
    dims: Tuple[int, int, int]
    k: int
    seed: int
    algo: str
    w: Optional[float]
    status: str
    cost: Optional[int]
    lb: Optional[int]
    runtime_s: float
    hl_expanded: int

    @property
    def solved(self) -> bool:
        return self.status in ("optimal", "bounded", "heuristic")


def parse_algos(text: str) -> Tuple[Tuple[str, Optional[float]], ...]:
    out = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        m = _ALGO_RE.match(part)
        if not m:
            raise ValueError(f"unknown algorithm {part!r}")
        name, warg = m.group(1), m.group(2)
        if name == "ecbs":
            out.append((name, float(warg) if warg else 1.01))
        elif warg:
            raise ValueError(f"{name} takes no factor: {part!r}")
        else:
            out.append((name, None))
    if not out:
        raise ValueError("no algorithms given")
    return tuple(out)


def parse_config(text: str) -> SuiteConfig:
    """Parse `key = value` lines; # starts a comment."""
    fields: Dict[str, str] = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"expected 'key = value', got {raw!r}")
        key, val = line.split("=", 1)
        fields[key.strip()] = val.strip()

    known = {"env", "dims", "density", "k_start", "k_step", "k_max",
             "instances", "timeout", "algos", "seed"}
    unknown = set(fields) - known
    if unknown:
        raise ValueError(f"unknown config keys: {sorted(unknown)}")

    def need(key: str) -> str:
        if key not in fields:
            raise ValueError(f"missing config key {key!r}")
        return fields[key]

    env = need("env")
    if env not in ("empty", "obstacles"):
        raise ValueError(f"env must be empty or obstacles, got {env!r}")
    if env == "obstacles":
        density = float(need("density"))
    else:
        density = float(fields.get("density", "0"))
    dims = tuple(int(p) for p in need("dims").split(","))
    if len(dims) != 3:
        raise ValueError("dims needs three comma-separated integers")
    cfg = SuiteConfig(
        env=env, dims=dims, density=density,
        k_start=int(need("k_start")), k_step=int(need("k_step")),
        k_max=int(need("k_max")), instances=int(need("instances")),
        timeout=float(need("timeout")), algos=parse_algos(need("algos")),
        seed=int(need("seed")))
    if cfg.k_start < 1 or cfg.k_step < 1 or cfg.k_max < cfg.k_start:
        raise ValueError("pipe increments must be positive and ordered")
    if cfg.instances < 1:
        raise ValueError("instances per increment must be >= 1")
    if cfg.timeout <= 0:
        raise ValueError("timeout must be positive")
    return cfg


def load_config(path) -> SuiteConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())


def instance_seed(base: int, k: int, rep: int) -> int:
    """Instance seed for repetition rep at pipe count k; pure in (base,k,rep)."""
    return mix64(mix64(base ^ mix64(k + 1)) ^ mix64((rep + 1) << 20))


def _generate(env: str, dims, density: float, k: int, seed: int) -> Instance:
    if env == "obstacles":
        return generate_obstacles(dims, k, density, seed)
    return generate_empty(dims, k, seed)


def _solve_task(task) -> RunRecord:
    env, dims, density, k, seed, algo, w, timeout = task
    inst = _generate(env, dims, density, k, seed)
    t0 = monotonic()
    if algo == "cbs":
        res = solve_cbs(inst, timeout)
    elif algo == "ecbs":
        res = solve_ecbs(inst, w, timeout)
    else:
        res = solve_prioritized(inst, timeout=timeout)
    runtime = monotonic() - t0
    if isinstance(res, OrderFailed):
        return RunRecord(env, dims, k, seed, algo, w, "order_failed",
                         None, None, runtime, 0)
    if res.solved:
        problems = validate_solution(inst, res)
        if problems:
            raise RuntimeError(
                f"solver {algo} produced an invalid solution on seed {seed}: "
                f"{problems[0].kind}: {problems[0].details}")
    return RunRecord(env, dims, k, seed, algo, w, res.status,
                     res.cost, res.lower_bound, runtime, res.hl_expanded)


def _fmt_w(w: Optional[float]) -> str:
    return "" if w is None else repr(float(w))


def _record_key(r: RunRecord) -> tuple:
    return (r.env, r.dims[0], r.dims[1], r.dims[2], r.k, r.seed,
            r.algo, _fmt_w(r.w))


def _row(r: RunRecord) -> List[str]:
    return [r.env, str(r.dims[0]), str(r.dims[1]), str(r.dims[2]),
            str(r.k), str(r.seed), r.algo, _fmt_w(r.w), r.status,
            "" if r.cost is None else str(r.cost),
            "" if r.lb is None else str(r.lb),
            f"{r.runtime_s:.3f}", str(r.hl_expanded)]


def _parse_row(row: Sequence[str]) -> RunRecord:
    env, dx, dy, dz, k, seed, algo, w, status, cost, lb, rt, hl = row
    return RunRecord(env, (int(dx), int(dy), int(dz)), int(k), int(seed),
                     algo, float(w) if w else None, status,
                     int(cost) if cost else None, int(lb) if lb else None,
                     float(rt), int(hl))


def read_records(path) -> List[RunRecord]:
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header != CSV_HEADER:
            raise ValueError(f"unexpected CSV header in {path}: {header}")
        return [_parse_row(row) for row in reader if row]


def run_suite(cfg: SuiteConfig, out_path, workers: Optional[int] = None) -> List[RunRecord]:
    """Run every (pipe count, repetition, algorithm) cell of the suite.

    Streams one CSV row per record, flushing as it goes; cells whose key is
    already present in out_path are skipped, so an interrupted run resumes
    by rerunning the same command.  Returns all records of the suite, both
    prior and new, in deterministic suite order.
    """
    if workers is None:
        workers = int(os.environ.get("PR_BENCH_WORKERS", "1"))
    prior: Dict[tuple, RunRecord] = {}
    exists = os.path.exists(out_path) and os.path.getsize(out_path) > 0
    if exists:
        for rec in read_records(out_path):
            prior[_record_key(rec)] = rec

    tasks = []
    order: List[tuple] = []
    for k in range(cfg.k_start, cfg.k_max + 1, cfg.k_step):
        for rep in range(cfg.instances):
            seed = instance_seed(cfg.seed, k, rep)
            for name, w in cfg.algos:
                key = (cfg.env, *cfg.dims, k, seed, name, _fmt_w(w))
                order.append(key)
                if key not in prior:
                    tasks.append((cfg.env, cfg.dims, cfg.density, k, seed,
                                  name, w, cfg.timeout))

    fresh: Dict[tuple, RunRecord] = {}
    with open(out_path, "a", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        if not exists:
            writer.writerow(CSV_HEADER)
            fh.flush()

        def emit(rec: RunRecord) -> None:
            writer.writerow(_row(rec))
            fh.flush()
            fresh[_record_key(rec)] = rec

        if workers > 1 and tasks:
            with ProcessPoolExecutor(max_workers=workers) as pool:
                for rec in pool.map(_solve_task, tasks):
                    emit(rec)
        else:
            for task in tasks:
                emit(_solve_task(task))

    out = []
    for key in order:
        out.append(prior.get(key) or fresh[key])
    return out


def success_rate(records: Sequence[RunRecord], k: int) -> float:
    """Percentage of records at pipe count k that solved."""
    at_k = [r for r in records if r.k == k]
    if not at_k:
        raise ValueError(f"no records at k={k}")
    return 100.0 * sum(1 for r in at_k if r.solved) / len(at_k)


def _instance_key(r: RunRecord) -> tuple:
    return (r.env, r.dims, r.k, r.seed)


def best_known_bound(record: RunRecord, records: Sequence[RunRecord]) -> Optional[int]:
    """Largest lower bound any run established for record's instance.

    An optimal run's cost equals its reported bound, so taking the maximum
    reported lower bound over all runs (timeouts included) covers both
    bound sources.
    """
    key = _instance_key(record)
    bounds = [r.lb for r in records
              if _instance_key(r) == key and r.lb is not None]
    return max(bounds) if bounds else None


def quality_ratio(record: RunRecord, records: Sequence[RunRecord]) -> Optional[float]:
    """record.cost relative to the best known bound; None when no bound."""
    if not record.solved or record.cost is None:
        raise ValueError("quality ratio is defined for solved records only")
    bound = best_known_bound(record, records)
    if bound is None or bound <= 0:
        return None
    return record.cost / bound


def runtime_profile(records: Sequence[RunRecord],
                    timeout_s: Optional[float] = None) -> List[float]:
    """Runtimes sorted ascending; timeout records count as the full timeout."""
    out = []
    for r in records:
        if r.status == "timeout" and timeout_s is not None:
            out.append(float(timeout_s))
        else:
            out.append(r.runtime_s)
    return sorted(out)
