"""Batch runner: many independent seeded runs, summarized and aggregated.

Each run owns a private RNG stream derived from (base_seed, run_id), so
inserting or removing other runs never changes its outcome, and worker
count affects wall clock only, never output bytes.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import IO, Sequence

import numpy as np

from .engine import World, write_trace_header, write_trace_rows
from .metrics import RbvProfile, classify_rbv, relative_diff, top_k_snapshot
from .model import SimConfig, Strategy

# Per-checkpoint columns of a run summary, in CSV order.
CHECKPOINT_FIELDS = (
    "io_in_top10",
    "rbv_in_top10",
    "best_io",
    "best_rbv",
    "best_is_rbv",
    "avg5_io",
    "avg5_rbv",
    "avg10_io",
    "avg10_rbv",
    "avg_all_io",
    "avg_all_rbv",
    "rd_best",
    "rd_avg5",
    "rd_avg10",
    "rd_all",
    "n_wallflower",
    "n_convenience",
    "n_soul_mate",
    "perf_wallflower",
    "perf_convenience",
    "perf_soul_mate",
)

# Columns whose sign feeds the "Nb of cases where IO > RBV" tallies.
RELATIVE_DIFF_FIELDS = ("rd_best", "rd_avg5", "rd_avg10", "rd_all")

AGGREGATE_STATISTICS = (
    "average",
    "st_dev",
    "variance",
    "median",
    "maxima",
    "minima",
    "n_io_gt_rbv",
    "n_rbv_gt_io",
    "pct_io_gt_rbv",
    "pct_rbv_gt_io",
)


@dataclass
class RunSummary:
    """One run's leaderboard and profile statistics per checkpoint cycle."""

    run_id: int
    seed: int
    checkpoints: dict[int, dict[str, float]] = field(default_factory=dict)


@dataclass
class BatchConfig:
    n_runs: int = 1008
    base_seed: int = 0
    sim: SimConfig = field(default_factory=SimConfig)
    parallelism: int = 1

    def validate(self) -> None:
        if self.n_runs < 1:
            raise ValueError("n_runs must be >= 1")
        if self.base_seed < 0:
            raise ValueError("base_seed must be a non-negative 64-bit integer")
        if self.parallelism < 1:
            raise ValueError("parallelism must be >= 1")
        self.sim.validate()


def derive_seed(base_seed: int, run_id: int) -> int:
    """Stable per-run seed: the first 64-bit word that the seed sequence
    (base_seed, run_id) generates. Part of the external contract."""
    return int(np.random.SeedSequence([base_seed, run_id]).generate_state(1, np.uint64)[0])


def _checkpoint_stats(world: World, cycle: int) -> dict[str, float]:
    firms = world.firms
    snap = top_k_snapshot(firms, 10, cycle)
    ranking_top = max(firms, key=lambda f: (f.total_perf, -f.id))
    stats: dict[str, float] = {
        "io_in_top10": snap.io_in_top10,
        "rbv_in_top10": snap.rbv_in_top10,
        "best_io": snap.best_io,
        "best_rbv": snap.best_rbv,
        "best_is_rbv": 1.0 if ranking_top.strategy is Strategy.RBV else 0.0,
        "avg5_io": snap.avg5_io,
        "avg5_rbv": snap.avg5_rbv,
        "avg10_io": snap.avg10_io,
        "avg10_rbv": snap.avg10_rbv,
        "avg_all_io": snap.avg_all_io,
        "avg_all_rbv": snap.avg_all_rbv,
    }
    for name, io_v, rbv_v in (
        ("rd_best", snap.best_io, snap.best_rbv),
        ("rd_avg5", snap.avg5_io, snap.avg5_rbv),
        ("rd_avg10", snap.avg10_io, snap.avg10_rbv),
        ("rd_all", snap.avg_all_io, snap.avg_all_rbv),
    ):
        stats[name] = relative_diff(io_v, rbv_v) if rbv_v != 0 else math.nan

    counts = {p: 0 for p in RbvProfile}
    perf_sums = {p: 0.0 for p in RbvProfile}
    for firm in firms:
        if firm.strategy is not Strategy.RBV:
            continue
        profile = classify_rbv(firm, firms)
        counts[profile] += 1
        perf_sums[profile] += firm.total_perf
    for profile, key in (
        (RbvProfile.WALLFLOWER, "wallflower"),
        (RbvProfile.CONVENIENCE_MARRIAGE, "convenience"),
        (RbvProfile.SOUL_MATE, "soul_mate"),
    ):
        n = counts[profile]
        stats[f"n_{key}"] = n
        stats[f"perf_{key}"] = perf_sums[profile] / n if n else math.nan
    return stats


def run_one(
    seed: int,
    config: SimConfig,
    run_id: int = 0,
    trace_out: IO[str] | None = None,
) -> RunSummary:
    """Run one simulation and capture checkpoint statistics.

    With n_cycles = 0 the summary holds a single cycle-0 snapshot of the
    initialized world. Traces always start with the initialization rows.
    """
    config.validate()
    rng = np.random.Generator(np.random.PCG64(seed))
    world = World(config, rng, run_id=run_id)
    summary = RunSummary(run_id=run_id, seed=seed)

    if trace_out is not None:
        write_trace_header(trace_out)
        write_trace_rows(trace_out, world._make_report({}))

    if config.n_cycles == 0:
        summary.checkpoints[0] = _checkpoint_stats(world, 0)
        return summary

    checkpoints = set(config.checkpoint_cycles)
    for cycle in range(1, config.n_cycles + 1):
        report = world.step_cycle()
        if trace_out is not None:
            write_trace_rows(trace_out, report)
        if cycle in checkpoints:
            summary.checkpoints[cycle] = _checkpoint_stats(world, cycle)
    return summary


def _run_task(args: tuple[int, int, SimConfig]) -> RunSummary:
    run_id, base_seed, config = args
    seed = derive_seed(base_seed, run_id)
    try:
        return run_one(seed, config, run_id=run_id)
    except Exception as exc:  # surface the offending seed to the caller
        raise RuntimeError(f"run {run_id} (seed {seed}) failed: {exc}") from exc


def run_batch(
    batch: BatchConfig,
    out_dir: str | None = None,
    trace: bool = False,
) -> tuple[list[RunSummary], list[dict]]:
    """Execute all runs, write runs.csv / aggregate.csv, return both tables.

    The aggregate is recomputed from the serialized rows, so `aggregate`
    run later over runs.csv reproduces aggregate.csv byte for byte.
    """
    batch.validate()
    tasks = [(i, batch.base_seed, batch.sim) for i in range(batch.n_runs)]
    if batch.parallelism > 1 and batch.n_runs > 1:
        with ProcessPoolExecutor(max_workers=batch.parallelism) as pool:
            summaries = list(pool.map(_run_task, tasks, chunksize=4))
    else:
        summaries = [_run_task(t) for t in tasks]
    summaries.sort(key=lambda s: s.run_id)

    if trace and out_dir is not None:
        trace_dir = os.path.join(out_dir, "traces")
        os.makedirs(trace_dir, exist_ok=True)
        for summary in summaries:
            path = os.path.join(trace_dir, f"run_{summary.run_id}.csv")
            with open(path, "w") as fh:
                run_one(summary.seed, batch.sim, run_id=summary.run_id, trace_out=fh)

    if out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)
        runs_path = os.path.join(out_dir, "runs.csv")
        write_runs_csv(runs_path, summaries)
        rows = read_runs_csv(runs_path)
    else:
        rows = summaries
    aggregate = aggregate_summaries(rows)
    if out_dir is not None:
        write_aggregate_csv(os.path.join(out_dir, "aggregate.csv"), aggregate)
    return summaries, aggregate


# -- CSV serialization -------------------------------------------------------


def _fmt(value: float) -> str:
    if isinstance(value, float):
        if math.isnan(value):
            return ""
        return format(value, ".17g")
    return str(value)


def _summary_columns(summaries: Sequence[RunSummary]) -> list[str]:
    cycles = sorted({c for s in summaries for c in s.checkpoints})
    cols = ["run_id", "seed"]
    for cycle in cycles:
        cols.extend(f"c{cycle}_{name}" for name in CHECKPOINT_FIELDS)
    return cols


def write_runs_csv(path: str, summaries: Sequence[RunSummary]) -> None:
    cols = _summary_columns(summaries)
    with open(path, "w") as fh:
        fh.write(",".join(cols) + "\n")
        for s in summaries:
            values = [str(s.run_id), str(s.seed)]
            for col in cols[2:]:
                cycle, name = col[1:].split("_", 1)
                stats = s.checkpoints.get(int(cycle))
                values.append(_fmt(stats[name]) if stats else "")
            fh.write(",".join(values) + "\n")


def read_runs_csv(path: str) -> list[RunSummary]:
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        summaries = []
        for line in fh:
            parts = line.rstrip("\n").split(",")
            record = dict(zip(header, parts))
            summary = RunSummary(
                run_id=int(record["run_id"]), seed=int(record["seed"])
            )
            for col, raw in record.items():
                if not col.startswith("c") or "_" not in col:
                    continue
                cycle, name = col[1:].split("_", 1)
                if name not in CHECKPOINT_FIELDS:
                    continue
                stats = summary.checkpoints.setdefault(int(cycle), {})
                stats[name] = float(raw) if raw != "" else math.nan
            summaries.append(summary)
    return summaries


def aggregate_summaries(summaries: Sequence[RunSummary]) -> list[dict]:
    """Mean / st.dev / variance / median / max / min per column, plus the
    IO-vs-RBV win tallies over the relative-difference columns.

    Statistics skip missing (blank) values; st.dev and variance are the
    population forms, so a single run aggregates with zero spread.
    """
    cycles = sorted({c for s in summaries for c in s.checkpoints})
    columns = []
    for cycle in cycles:
        columns.extend((cycle, name) for name in CHECKPOINT_FIELDS)

    rows = []
    for stat in AGGREGATE_STATISTICS:
        row: dict[str, float] = {"statistic": stat}
        for cycle, name in columns:
            col = f"c{cycle}_{name}"
            values = np.array(
                [s.checkpoints.get(cycle, {}).get(name, math.nan) for s in summaries]
            )
            finite = values[~np.isnan(values)]
            if stat in ("n_io_gt_rbv", "n_rbv_gt_io", "pct_io_gt_rbv", "pct_rbv_gt_io"):
                if name not in RELATIVE_DIFF_FIELDS:
                    row[col] = math.nan
                    continue
                n_io = int(np.sum(finite > 0))
                n_rbv = int(np.sum(finite < 0))
                if stat == "n_io_gt_rbv":
                    row[col] = float(n_io)
                elif stat == "n_rbv_gt_io":
                    row[col] = float(n_rbv)
                elif len(finite) == 0:
                    row[col] = math.nan
                elif stat == "pct_io_gt_rbv":
                    row[col] = 100.0 * n_io / len(finite)
                else:
                    row[col] = 100.0 * n_rbv / len(finite)
                continue
            if len(finite) == 0:
                row[col] = math.nan
                continue
            if stat == "average":
                row[col] = float(np.mean(finite))
            elif stat == "st_dev":
                row[col] = float(np.std(finite))
            elif stat == "variance":
                row[col] = float(np.var(finite))
            elif stat == "median":
                row[col] = float(np.median(finite))
            elif stat == "maxima":
                row[col] = float(np.max(finite))
            else:
                row[col] = float(np.min(finite))
        rows.append(row)
    return rows


def write_aggregate_csv(path: str, aggregate: list[dict]) -> None:
    if not aggregate:
        raise ValueError("empty aggregate")
    cols = [c for c in aggregate[0] if c != "statistic"]
    with open(path, "w") as fh:
        fh.write(",".join(["statistic"] + cols) + "\n")
        for row in aggregate:
            fh.write(
                ",".join([str(row["statistic"])] + [_fmt(row[c]) for c in cols]) + "\n"
            )
