import csv
import pathlib
import subprocess
import sys

import pytest

from piperoute.bench import (CSV_HEADER, RunRecord, SuiteConfig,
                             best_known_bound, instance_seed, load_config,
                             parse_algos, parse_config, quality_ratio,
                             read_records, run_suite, runtime_profile,
                             success_rate)

CONFIG_TEXT = """\
# three pipe counts, two instances each
env = empty
dims = 6, 6, 2
k_start = 1
k_step = 1
k_max = 3
instances = 2
timeout = 5
algos = cbs, priority
seed = 7
"""


def small_cfg(**overrides):
    cfg = parse_config(CONFIG_TEXT)
    return SuiteConfig(**{**cfg.__dict__, **overrides})


def rec(k=5, seed=1, algo="cbs", w=None, status="optimal", cost=10, lb=10,
        runtime_s=1.0, hl=3, env="empty", dims=(6, 6, 2)):
    return RunRecord(env, dims, k, seed, algo, w, status, cost, lb,
                     runtime_s, hl)


def test_parse_algos():
    assert parse_algos("cbs") == (("cbs", None),)
    assert parse_algos("priority") == (("priority", None),)
    assert parse_algos("ecbs") == (("ecbs", 1.01),)
    assert parse_algos("ecbs(1.5)") == (("ecbs", 1.5),)
    assert parse_algos("cbs, ecbs(1.05), priority") == \
        (("cbs", None), ("ecbs", 1.05), ("priority", None))
    for bad in ("cbs(2.0)", "priority(1.1)", "dijkstra", "", "ecbs(x)"):
        with pytest.raises(ValueError):
            parse_algos(bad)


def test_parse_config():
    cfg = parse_config(CONFIG_TEXT)
    assert cfg.env == "empty"
    assert cfg.dims == (6, 6, 2)
    assert (cfg.k_start, cfg.k_step, cfg.k_max) == (1, 1, 3)
    assert cfg.instances == 2
    assert cfg.timeout == 5.0
    assert cfg.algos == (("cbs", None), ("priority", None))
    assert cfg.seed == 7


def test_parse_config_obstacles_needs_density():
    text = CONFIG_TEXT.replace("env = empty", "env = obstacles")
    with pytest.raises(ValueError):
        parse_config(text)
    cfg = parse_config(text + "density = 0.10\n")
    assert cfg.density == 0.10


def test_parse_config_rejects_bad_input():
    cases = [
        CONFIG_TEXT + "color = blue\n",                       # unknown key
        CONFIG_TEXT.replace("seed = 7\n", ""),                # missing key
        CONFIG_TEXT.replace("env = empty", "env = maze"),
        CONFIG_TEXT.replace("dims = 6, 6, 2", "dims = 6, 6"),
        CONFIG_TEXT.replace("k_max = 3", "k_max = 0"),
        CONFIG_TEXT.replace("instances = 2", "instances = 0"),
        CONFIG_TEXT.replace("timeout = 5", "timeout = 0"),
        CONFIG_TEXT.replace("env = empty", "just some words"),
    ]
    for text in cases:
        with pytest.raises(ValueError):
            parse_config(text)


def test_load_config(tmp_path):
    path = tmp_path / "suite.cfg"
    path.write_text(CONFIG_TEXT, encoding="utf-8")
    assert load_config(path) == parse_config(CONFIG_TEXT)


def test_instance_seed_frozen_and_pure():
    assert instance_seed(0, 1, 0) == 17604571196856411377
    assert instance_seed(7, 20, 0) == 3480496045642340646
    assert instance_seed(7, 20, 1) == 1659887479632258270
    assert instance_seed(7, 40, 0) == 9917421194358909949
    assert instance_seed(7, 20, 0) == instance_seed(7, 20, 0)
    seen = {instance_seed(7, k, rep) for k in (1, 2, 3) for rep in (0, 1, 2)}
    assert len(seen) == 9


def test_run_suite_counts_and_csv(tmp_path):
    out = tmp_path / "results.csv"
    cfg = small_cfg()
    records = run_suite(cfg, out)
    # 3 pipe counts x 2 instances x 2 algorithms
    assert len(records) == 12
    assert all(r.solved for r in records)

    with open(out, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0] == CSV_HEADER
    assert len(rows) == 13

    back = read_records(out)
    assert [(r.env, r.dims, r.k, r.seed, r.algo, r.w, r.status, r.cost,
             r.lb, r.hl_expanded) for r in back] == \
           [(r.env, r.dims, r.k, r.seed, r.algo, r.w, r.status, r.cost,
             r.lb, r.hl_expanded) for r in records]
    for a, b in zip(back, records):
        assert abs(a.runtime_s - b.runtime_s) <= 1e-3


def test_run_suite_resumes(tmp_path):
    out = tmp_path / "results.csv"
    first = run_suite(small_cfg(k_max=2), out)
    assert len(first) == 8
    rows_before = out.read_text().count("\n")

    again = run_suite(small_cfg(k_max=2), out)
    assert out.read_text().count("\n") == rows_before   # nothing re-run
    assert [(r.seed, r.algo, r.cost) for r in again] == \
        [(r.seed, r.algo, r.cost) for r in first]

    extended = run_suite(small_cfg(), out)              # k_max back to 3
    assert len(extended) == 12
    assert out.read_text().count("\n") == rows_before + 4


def test_run_suite_same_instances_across_algos(tmp_path):
    records = run_suite(small_cfg(), tmp_path / "r.csv")
    by_algo = {}
    for r in records:
        by_algo.setdefault(r.algo, []).append((r.k, r.seed))
    assert by_algo["cbs"] == by_algo["priority"]


def test_run_suite_parallel_matches_serial(tmp_path):
    cfg = small_cfg(k_max=1)
    serial = run_suite(cfg, tmp_path / "serial.csv", workers=1)
    parallel = run_suite(cfg, tmp_path / "par.csv", workers=2)
    assert [(r.seed, r.algo, r.status, r.cost, r.lb) for r in serial] == \
        [(r.seed, r.algo, r.status, r.cost, r.lb) for r in parallel]


def test_success_rate():
    records = [rec(status="optimal"), rec(status="timeout", cost=None),
               rec(status="bounded", algo="ecbs", w=1.01),
               rec(status="order_failed", algo="priority", cost=None, lb=None)]
    assert success_rate(records, 5) == 50.0
    assert success_rate([rec(status="heuristic", algo="priority")], 5) == 100.0
    with pytest.raises(ValueError):
        success_rate(records, 99)


def test_best_known_bound_and_quality_ratio():
    timeout_cbs = rec(status="timeout", cost=None, lb=10)
    bounded = rec(algo="ecbs", w=1.2, status="bounded", cost=12, lb=9)
    other_instance = rec(seed=2, lb=99)
    records = [timeout_cbs, bounded, other_instance]
    assert best_known_bound(bounded, records) == 10
    assert quality_ratio(bounded, records) == 12 / 10
    with pytest.raises(ValueError):
        quality_ratio(timeout_cbs, records)
    lonely = rec(seed=3, status="heuristic", algo="priority", cost=8, lb=None)
    assert best_known_bound(lonely, records + [lonely]) is None
    assert quality_ratio(lonely, records + [lonely]) is None


def test_runtime_profile():
    records = [rec(runtime_s=1.0),
               rec(status="timeout", cost=None, runtime_s=3.2),
               rec(algo="ecbs", w=1.01, status="bounded", runtime_s=0.5)]
    assert runtime_profile(records, timeout_s=20.0) == [0.5, 1.0, 20.0]
    assert runtime_profile(records) == [0.5, 1.0, 3.2]
    assert runtime_profile([]) == []


def test_plot_script_emits_pngs(tmp_path):
    pytest.importorskip("matplotlib")
    out = tmp_path / "results.csv"
    run_suite(small_cfg(), out)
    script = pathlib.Path(__file__).resolve().parent.parent / "benchmarks" \
        / "plot_results.py"
    prefix = tmp_path / "plots" / "p"
    proc = subprocess.run(
        [sys.executable, str(script), str(out),
         "--out-prefix", str(prefix), "--timeout", "5"],
        capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    for name in ("success", "runtime", "quality"):
        assert (tmp_path / "plots" / f"p_{name}.png").stat().st_size > 0
