"""Command-line benchmark driver.

Subcommands::

    pater run     --algo ... --data ...      accuracy reports (+ CPU timing)
    pater sweep   --algo wpater1 --data ...  best-weight table over the alpha grid
    pater compare REPORT.csv [...]           Friedman / Nemenyi summary
    pater trace   --algo ... --data ...      cumulative prequential accuracy files

``--data`` accepts registry names, file paths, or synthetic generators
(``synth:separable``, ``synth:imbalanced:0.05``). Settings come from
defaults, then a ``--config`` JSON file, then explicit flags.

Exit status is 0 on success, 1 on a data or protocol error and 2 on a
usage error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import re
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields
from pathlib import Path

import numpy as np

from . import schemas
from .data import (
    REGISTRY_ENV,
    entry_path,
    load_delimited,
    load_entry,
    load_libsvm,
    load_registry,
)
from .evaluation import BATCH_TER, NORMALIZE_MODES, DEFAULT_GRID, cross_validate, sweep_weights
from .exceptions import ProtocolError
from .learners import ClassWeights, Variant
from .stats import friedman_nemenyi, rank_rows
from .synthetic import parse_synthetic

ALL_VARIANTS = [v.value for v in Variant]


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    algorithms: list = field(default_factory=lambda: list(ALL_VARIANTS))
    datasets: list = field(default_factory=list)
    seed: int = 0
    runs: int = 10
    alpha_neg: float = 1.0
    alpha_pos: float = 1.0
    normalize: str = "per-fold"
    clip_tau: bool = False
    bias: bool = False
    output_dir: str = "pater-out"
    registry: str | None = None
    jobs: int = 1
    grid: list = field(default_factory=lambda: list(DEFAULT_GRID))
    metric: str = "accuracy"

    def validate(self):
        if not self.datasets:
            raise UsageError("no datasets given (use --data)")
        algos = []
        for a in self.algorithms:
            if a == BATCH_TER:
                algos.append(a)
                continue
            try:
                algos.append(Variant.parse(a).value)
            except ValueError as exc:
                raise UsageError(f"{exc} (or {BATCH_TER})") from None
        self.algorithms = algos
        if self.runs < 1:
            raise UsageError("--runs must be at least 1")
        if self.normalize not in NORMALIZE_MODES:
            raise UsageError(f"--normalize must be one of {', '.join(NORMALIZE_MODES)}")
        try:
            ClassWeights(self.alpha_neg, self.alpha_pos)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        if self.jobs < 1:
            raise UsageError("--jobs must be at least 1")
        return self

    def class_weights(self):
        return ClassWeights(self.alpha_neg, self.alpha_pos)

    def summary(self):
        """Deterministic, path-free view written into output files."""
        return {
            "algorithms": list(self.algorithms),
            "datasets": list(self.datasets),
            "seed": self.seed,
            "runs": self.runs,
            "alpha_neg": self.alpha_neg,
            "alpha_pos": self.alpha_pos,
            "normalize": self.normalize,
            "clip_tau": self.clip_tau,
            "bias": self.bias,
            "grid": list(self.grid),
            "metric": self.metric,
        }


# ---------------------------------------------------------------------------
# dataset resolution

def _looks_like_libsvm(path):
    with open(path, encoding="utf-8") as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if line:
                toks = line.split()
                return len(toks) > 1 and ":" in toks[1]
    return False


def resolve_datasets(config):
    """Load every dataset named in ``config`` or fail listing the missing ones."""
    registry = None
    registry_dir = None
    missing, found = [], []
    for name in config.datasets:
        synth = None
        try:
            synth = parse_synthetic(name, seed=config.seed)
        except (ValueError, IndexError) as exc:
            missing.append(f"{name} ({exc})")
            continue
        if synth is not None:
            found.append(synth.with_bias() if config.bias else synth)
            continue
        path = Path(name)
        if path.is_file():
            if _looks_like_libsvm(path):
                ds = load_libsvm(path, name=path.stem, add_bias=config.bias)
            else:
                ds = load_delimited(path, name=path.stem, add_bias=config.bias)
            found.append(ds)
            continue
        if registry is None:
            registry = load_registry(config.registry)
            if config.registry is not None:
                registry_dir = Path(config.registry).resolve().parent
        entry = registry.get(name)
        root = os.environ.get(REGISTRY_ENV) or registry_dir
        target = entry_path(entry, root) if entry is not None else None
        if entry is None:
            missing.append(f"{name} (not a file, synthetic spec, or registry name)")
        elif target is None or not target.exists():
            missing.append(f"{name} (registry file {target} not found; set {REGISTRY_ENV})")
        else:
            found.append(load_entry(entry, root, add_bias=config.bias))
    if missing:
        raise FileNotFoundError("unresolvable datasets:\n  " + "\n  ".join(missing))
    return found


# ---------------------------------------------------------------------------
# task execution

def _cv_task(args):
    algorithm, dataset, cfg, weights, keep_traces = args
    return cross_validate(algorithm, dataset, seed=cfg["seed"], runs=cfg["runs"],
                          class_weights=weights, normalize=cfg["normalize"],
                          clip_tau=cfg["clip_tau"], keep_traces=keep_traces)


def _sweep_task(args):
    algorithm, dataset, cfg = args
    return sweep_weights(algorithm, dataset, grid=cfg["grid"], metric=cfg["metric"],
                         seed=cfg["seed"], runs=cfg["runs"], normalize=cfg["normalize"],
                         clip_tau=cfg["clip_tau"])


def _execute(func, tasks, jobs):
    """Run tasks, preserving input order regardless of parallelism."""
    if jobs <= 1 or len(tasks) <= 1:
        return [func(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(func, tasks))


def _cv_reports(config, datasets, keep_traces=False):
    cfg = config.summary()
    tasks = []
    for ds in datasets:
        for algo in config.algorithms:
            weighted = algo != BATCH_TER and Variant.parse(algo).is_weighted
            tasks.append((algo, ds, cfg, config.class_weights() if weighted else None,
                          keep_traces))
    return _execute(_cv_task, tasks, config.jobs)


# ---------------------------------------------------------------------------
# output helpers

def _num(x):
    """JSON-safe float (NaN/inf become null)."""
    x = float(x)
    return x if math.isfinite(x) else None


def _csv_text(columns, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    writer.writerows(rows)
    return buf.getvalue()


def _fmt(x):
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, float):
        return repr(x)
    return str(x)


class OutputWriter:
    """Single serialized writer; files are written atomically via rename."""

    def __init__(self, out_dir):
        self.out_dir = Path(out_dir)
        self.written = []

    def write(self, relpath, text):
        path = self.out_dir / relpath
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_name(path.name + ".tmp")
        with open(tmp, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
        self.written.append(path)
        return path

    def write_json(self, relpath, obj):
        return self.write(relpath, json.dumps(obj, indent=2, allow_nan=False) + "\n")


def _display(algorithm):
    return algorithm if algorithm == BATCH_TER else Variant.parse(algorithm).display_name


def _safe(name):
    return re.sub(r"[^A-Za-z0-9._-]+", "_", name).strip("_") or "dataset"


def _record(report):
    rec = report.to_record()
    rec["mean_balanced_accuracy"] = _num(rec["mean_balanced_accuracy"])
    return rec


# ---------------------------------------------------------------------------
# commands

def cmd_run(config, stdout=sys.stdout):
    datasets = resolve_datasets(config)
    reports = _cv_reports(config, datasets)
    out = OutputWriter(config.output_dir)
    records = [_record(r) for r in reports]
    rows = []
    for rec in records:
        row = [_fmt(rec[c]) if c != "per_run_accuracy" else
               ";".join(repr(v) for v in rec[c]) for c in schemas.REPORT_CSV_COLUMNS]
        rows.append(row)
    out.write("report.csv", _csv_text(schemas.REPORT_CSV_COLUMNS, rows))
    out.write_json("report.json", {"command": "run", "config": config.summary(),
                                   "records": records})
    # CPU time differs between invocations, so it lives in its own file.
    out.write("timing.csv", _csv_text(
        schemas.TIMING_CSV_COLUMNS,
        [[r.algorithm, r.dataset, repr(r.mean_cpu_seconds)] for r in reports]))
    for r in reports:
        print(f"{r.dataset:24s} {_display(r.algorithm):10s} {r.mean:8.3f} +- {r.stddev:6.3f}  cpu {r.mean_cpu_seconds:.4f}s", file=stdout)
    return 0


def cmd_sweep(config, stdout=sys.stdout):
    for a in config.algorithms:
        if a == BATCH_TER or not Variant.parse(a).is_weighted:
            raise UsageError(f"sweep needs weighted variants (wpater1, wpater2), got {a}")
    if not config.grid or any(not (g > 0) for g in config.grid):
        raise UsageError("--grid must be a non-empty list of positive reals")
    datasets = resolve_datasets(config)
    cfg = config.summary()
    tasks = [(a, ds, cfg) for ds in datasets for a in config.algorithms]
    results = _execute(_sweep_task, tasks, config.jobs)
    ratios = {ds.name: ds.imbalance_ratio for ds in datasets}
    rows = []
    for res in results:
        rows.append({
            "dataset": res.dataset,
            "algorithm": res.algorithm,
            "ratio": _num(ratios[res.dataset]),
            "needed_weight": res.needed_weight,
            "best_weight": res.best_weight,
            "match": res.match,
            "best_alpha_neg": res.best_weights.alpha_neg,
            "best_alpha_pos": res.best_weights.alpha_pos,
            "best_score": _num(res.best_score),
            "scores": [{"side": s, "g": g, "score": _num(v)} for s, g, v in res.scores],
        })
    match_count = sum(r["match"] for r in rows)
    out = OutputWriter(config.output_dir)
    out.write("sweep.csv", _csv_text(
        schemas.SWEEP_CSV_COLUMNS,
        [[_fmt(r[c]) for c in schemas.SWEEP_CSV_COLUMNS] for r in rows]))
    out.write_json("sweep.json", {"command": "sweep", "config": cfg, "rows": rows,
                                  "match_count": match_count})
    print(f"{'dataset':24s} {'algo':8s} ratio   NW BW match", file=stdout)
    for r in rows:
        print(f"{r['dataset']:24s} {r['algorithm']:8s} {r['ratio']:.3f}  {r['needed_weight']}  "
              f"{r['best_weight']}  {int(r['match'])}", file=stdout)
    print(f"matches (BW equals NW): {match_count}/{len(rows)}", file=stdout)
    return 0


def read_report_grid(paths, metric=None):
    """Collect an (N datasets, k algorithms) grid from report/timing CSV files.

    Algorithm names that occur in more than one file are suffixed with
    ``@<file index>`` so identical report sets stay distinguishable.
    """
    tables = []
    for p in paths:
        with open(p, encoding="utf-8", newline="") as fh:
            rows = list(csv.DictReader(fh))
        if not rows:
            raise ProtocolError(f"{p}: no records")
        tables.append(rows)
    if metric is None:
        metric = "mean" if "mean" in tables[0][0] else "mean_cpu_seconds"
    seen = {}
    for i, rows in enumerate(tables):
        for a in {r["algorithm"] for r in rows}:
            seen.setdefault(a, set()).add(i)
    cells = {}
    algorithms, datasets = [], []
    for i, rows in enumerate(tables):
        for r in rows:
            if metric not in r:
                raise ProtocolError(f"{paths[i]}: no column {metric!r}")
            a = r["algorithm"] if len(seen[r["algorithm"]]) == 1 else f"{r['algorithm']}@{i}"
            if a not in algorithms:
                algorithms.append(a)
            if r["dataset"] not in datasets:
                datasets.append(r["dataset"])
            cells[(r["dataset"], a)] = float(r[metric])
    missing = [(d, a) for d in datasets for a in algorithms if (d, a) not in cells]
    if missing:
        listing = ", ".join(f"{a} on {d}" for d, a in missing)
        raise ProtocolError(f"incomplete grid, missing cells: {listing}")
    grid = np.array([[cells[(d, a)] for a in algorithms] for d in datasets])
    return grid, algorithms, datasets, metric


def cmd_compare(paths, alpha=0.05, metric=None, output_dir=None, stdout=sys.stdout):
    if not paths:
        raise UsageError("compare needs at least one report file")
    grid, algorithms, datasets, metric = read_report_grid(paths, metric)
    if len(algorithms) < 2:
        raise UsageError(f"compare needs at least 2 algorithms, found {algorithms}")
    if len(datasets) < 2:
        raise ProtocolError(f"compare needs at least 2 datasets, found {datasets}")
    higher = metric != "mean_cpu_seconds"
    try:
        res = friedman_nemenyi(grid, algorithms, alpha=alpha, higher_is_better=higher)
    except ValueError as exc:
        if isinstance(exc, ProtocolError):
            raise
        raise UsageError(str(exc)) from None
    ranks = rank_rows(grid, higher)
    summary = {
        "command": "compare",
        "metric": metric,
        "higher_is_better": higher,
        "algorithms": algorithms,
        "datasets": datasets,
        "ranks": ranks.tolist(),
        "mean_ranks": res.mean_ranks,
        "friedman_statistic": res.friedman_statistic,
        "p_value": res.p_value,
        "critical_difference": res.critical_difference,
        "alpha": alpha,
        "groups": [list(g) for g in res.groups],
    }
    print(f"k={len(algorithms)} algorithms, N={len(datasets)} datasets, metric={metric}",
          file=stdout)
    for a in sorted(res.mean_ranks, key=res.mean_ranks.get):
        print(f"  {a:16s} mean rank {res.mean_ranks[a]:.3f}", file=stdout)
    print(f"Friedman chi2 = {res.friedman_statistic:.4f} (p = {res.p_value:.4g})", file=stdout)
    print(f"Nemenyi CD (alpha={alpha}) = {res.critical_difference:.4f}", file=stdout)
    for g in res.groups:
        print("  group: " + " -- ".join(g), file=stdout)
    if output_dir is not None:
        out = OutputWriter(output_dir)
        out.write_json("compare.json", summary)
        out.write("ranks.csv", _csv_text(
            ["algorithm", "mean_rank"],
            [[a, repr(res.mean_ranks[a])] for a in algorithms]))
    return 0


def cmd_trace(config, stdout=sys.stdout):
    if BATCH_TER in config.algorithms:
        raise UsageError(f"{BATCH_TER} has no online trace")
    datasets = resolve_datasets(config)
    reports = _cv_reports(config, datasets, keep_traces=True)
    out = OutputWriter(config.output_dir)
    entries, summary = [], []
    for rep in reports:
        finals = []
        for run, fold, trace in rep.traces:
            rel = f"traces/{_safe(rep.algorithm)}__{_safe(rep.dataset)}__run{run}_fold{fold}.csv"
            out.write(rel, trace.to_csv())
            entries.append({"algorithm": rep.algorithm, "dataset": rep.dataset, "run": run,
                            "fold": fold, "file": rel, "length": len(trace),
                            "final_accuracy": trace.final})
            finals.append(trace.final)
        mean_final = float(np.mean(finals))
        summary.append({"algorithm": rep.algorithm, "dataset": rep.dataset,
                        "mean_final_accuracy": mean_final})
        print(f"{rep.dataset:24s} {_display(rep.algorithm):10s} "
              f"final cumulative accuracy ({100 * mean_final:.3f})", file=stdout)
    out.write_json("manifest.json", {"command": "trace", "config": config.summary(),
                                     "traces": entries, "summary": summary})
    return 0


# ---------------------------------------------------------------------------
# argument parsing

def _split_list(values):
    out = []
    for v in values or []:
        out.extend(p for p in v.split(",") if p)
    return out


def _parse_grid(text):
    try:
        return [float(g) for g in text.split(",") if g.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid grid {text!r}") from None


def build_parser():
    parser = argparse.ArgumentParser(prog="pater", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--algo", action="append", metavar="NAME",
                       help=f"algorithm(s), comma separated or repeated; 'all' = {','.join(ALL_VARIANTS)}")
        p.add_argument("--data", action="append", metavar="NAME",
                       help="registry name, file path, or synth:separable / synth:imbalanced:<ratio>")
        p.add_argument("--registry", help="registry JSON file (default: bundled)")
        p.add_argument("--config", help="JSON config file; flags override its values")
        p.add_argument("--seed", type=int)
        p.add_argument("--runs", type=int, help="CV repetitions (default 10)")
        p.add_argument("--alpha-neg", type=float, dest="alpha_neg")
        p.add_argument("--alpha-pos", type=float, dest="alpha_pos")
        p.add_argument("--normalize", choices=NORMALIZE_MODES)
        p.add_argument("--clip-tau", action="store_true", default=None, dest="clip_tau",
                       help="clamp negative TER step sizes at 0")
        p.add_argument("--bias", action="store_true", default=None,
                       help="append a constant-1 feature")
        p.add_argument("--jobs", type=int, help="parallel worker processes")
        p.add_argument("--out", dest="output_dir", help="output directory")

    p_run = sub.add_parser("run", help="accuracy and CPU-time reports")
    common(p_run)
    p_sweep = sub.add_parser("sweep", help="best class weight over the alpha grid")
    common(p_sweep)
    p_sweep.add_argument("--grid", type=_parse_grid)
    p_sweep.add_argument("--metric", choices=("accuracy", "balanced"))
    p_trace = sub.add_parser("trace", help="cumulative prequential accuracy traces")
    common(p_trace)
    p_cmp = sub.add_parser("compare", help="Friedman test and Nemenyi groups over reports")
    p_cmp.add_argument("reports", nargs="+", help="report.csv or timing.csv files")
    p_cmp.add_argument("--alpha", type=float, default=0.05, choices=(0.05, 0.1))
    p_cmp.add_argument("--metric", help="column to rank (default: mean, or mean_cpu_seconds)")
    p_cmp.add_argument("--out", dest="output_dir")
    return parser


def config_from_args(args):
    config = RunConfig()
    if getattr(args, "config", None):
        with open(args.config, encoding="utf-8") as fh:
            loaded = json.load(fh)
        names = {f.name for f in fields(RunConfig)}
        unknown = set(loaded) - names
        if unknown:
            raise UsageError(f"unknown config keys: {sorted(unknown)}")
        for k, v in loaded.items():
            setattr(config, k, v)
    overrides = {
        "seed": args.seed, "runs": args.runs, "alpha_neg": args.alpha_neg,
        "alpha_pos": args.alpha_pos, "normalize": args.normalize, "clip_tau": args.clip_tau,
        "bias": args.bias, "jobs": args.jobs, "output_dir": args.output_dir,
        "registry": args.registry, "grid": getattr(args, "grid", None),
        "metric": getattr(args, "metric", None),
    }
    for k, v in overrides.items():
        if v is not None:
            setattr(config, k, v)
    algos = _split_list(args.algo)
    if algos:
        config.algorithms = ALL_VARIANTS if algos == ["all"] else algos
    data = _split_list(args.data)
    if data:
        config.datasets = data
    return config.validate()


def main(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        if args.command == "compare":
            return cmd_compare(args.reports, args.alpha, args.metric, args.output_dir, stdout)
        config = config_from_args(args)
        command = {"run": cmd_run, "sweep": cmd_sweep, "trace": cmd_trace}[args.command]
        return command(config, stdout)
    except UsageError as exc:
        print(f"pater {args.command}: usage error: {exc}", file=stderr)
        return 2
    except (FileNotFoundError, ValueError, KeyError, ArithmeticError,
            np.linalg.LinAlgError) as exc:
        print(f"pater {args.command}: error: {exc}", file=stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
