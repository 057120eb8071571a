#!/usr/bin/env python3
"""Render the three benchmark metrics from suite CSVs to PNG files.

Reads CSVs produced by `piperoute bench`, groups records by environment and
algorithm, and draws success rate per pipe count, the sorted runtime
profile, and the solution-quality ratio profile.  This script is deliberately
small and replaceable; the CSV is the stable interface.

Usage: python3 benchmarks/plot_results.py results.csv [more.csv ...]
           [--out-prefix plots/run1] [--timeout 20]
"""

import argparse
import os
from collections import defaultdict

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from piperoute.bench import (best_known_bound, read_records, runtime_profile,
                             success_rate)


def label(env, algo, w):
    name = algo if w is None else f"{algo}({w:g})"
    return f"{env} {name}"


def group(records):
    out = defaultdict(list)
    for r in records:
        out[(r.env, r.algo, r.w)].append(r)
    return dict(sorted(out.items(), key=lambda kv: label(*kv[0])))


def plot_success(groups, path):
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for (env, algo, w), recs in groups.items():
        ks = sorted({r.k for r in recs})
        ax.plot(ks, [success_rate(recs, k) for k in ks], marker="o",
                label=label(env, algo, w))
    ax.axhline(50, color="gray", lw=0.8, ls=":")
    ax.set_xlabel("pipes")
    ax.set_ylabel("success rate [%]")
    ax.set_ylim(-2, 102)
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_runtimes(groups, path, timeout):
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for (env, algo, w), recs in groups.items():
        times = runtime_profile(recs, timeout_s=timeout)
        ax.plot(range(1, len(times) + 1), times, lw=1.2,
                label=label(env, algo, w))
    ax.set_xlabel("instances, sorted by runtime")
    ax.set_ylabel("runtime [s]")
    ax.set_yscale("log")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def plot_quality(groups, records, path):
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for (env, algo, w), recs in groups.items():
        ratios = []
        for r in recs:
            if not r.solved or r.cost is None:
                continue
            bound = best_known_bound(r, records)
            if bound:
                ratios.append(r.cost / bound)
        if ratios:
            ratios.sort()
            ax.plot(range(1, len(ratios) + 1), ratios, lw=1.2,
                    label=label(env, algo, w))
    ax.set_xlabel("solved instances, sorted by quality ratio")
    ax.set_ylabel("cost / best known bound")
    ax.legend(fontsize=8)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("csvs", nargs="+", help="CSV files from piperoute bench")
    ap.add_argument("--out-prefix", default="plots",
                    help="prefix for the emitted PNG files")
    ap.add_argument("--timeout", type=float, default=None,
                    help="suite timeout; timeout records plot at this value")
    args = ap.parse_args()

    records = []
    for path in args.csvs:
        records.extend(read_records(path))
    if not records:
        raise SystemExit("no records found")
    groups = group(records)

    prefix_dir = os.path.dirname(args.out_prefix)
    if prefix_dir:
        os.makedirs(prefix_dir, exist_ok=True)
    for name, draw in (("success", lambda p: plot_success(groups, p)),
                       ("runtime", lambda p: plot_runtimes(groups, p,
                                                           args.timeout)),
                       ("quality", lambda p: plot_quality(groups, records, p))):
        out = f"{args.out_prefix}_{name}.png"
        draw(out)
        print(out)


if __name__ == "__main__":
    main()
