"""Batch harness: seed derivation, run summaries, CSV round-trips, and
order-independent aggregation."""

import math
import os

import pytest

from strategem.experiment import (
    BatchConfig,
    RunSummary,
    aggregate_summaries,
    derive_seed,
    read_runs_csv,
    run_batch,
    run_one,
    write_runs_csv,
)
from strategem.model import SimConfig


def small_sim(**extra):
    overrides = dict(
        n_firms=20, n_markets=5, n_cycles=10, checkpoint_cycles=(5, 10)
    )
    overrides.update(extra)
    return SimConfig(**overrides)


class TestDeriveSeed:
    def test_depends_only_on_base_and_run_id(self):
        assert derive_seed(42, 3) == derive_seed(42, 3)

    def test_distinct_across_runs_and_bases(self):
        seeds = {derive_seed(base, i) for base in (0, 1, 42) for i in range(200)}
        assert len(seeds) == 600

    def test_is_64_bit_unsigned(self):
        s = derive_seed(0, 0)
        assert 0 <= s < 2**64


class TestRunOne:
    def test_zero_cycles_snapshots_initial_world(self):
        summary = run_one(derive_seed(0, 0), small_sim(n_cycles=0))
        assert list(summary.checkpoints) == [0]
        stats = summary.checkpoints[0]
        assert stats["io_in_top10"] + stats["rbv_in_top10"] == 10

    def test_fixed_seed_is_deterministic(self):
        a = run_one(123, small_sim())
        b = run_one(123, small_sim())
        assert a.checkpoints == b.checkpoints

    def test_checkpoints_match_config(self):
        summary = run_one(7, small_sim())
        assert sorted(summary.checkpoints) == [5, 10]

    def test_invalid_config_aborts_before_cycles(self):
        with pytest.raises(ValueError):
            run_one(0, small_sim(n_firms=3))

    def test_trace_has_header_and_init_rows(self, tmp_path):
        path = tmp_path / "trace.csv"
        with open(path, "w") as fh:
            run_one(derive_seed(0, 0), small_sim(n_cycles=0), trace_out=fh)
        lines = path.read_text().splitlines()
        assert lines[0].startswith("run_id,cycle,firm_id")
        assert len(lines) == 1 + 20  # header + one init row per firm


class TestRunsCsvRoundTrip:
    def test_write_read_identity(self, tmp_path):
        summaries = [
            run_one(derive_seed(1, i), small_sim(), run_id=i) for i in range(3)
        ]
        path = os.path.join(tmp_path, "runs.csv")
        write_runs_csv(path, summaries)
        loaded = read_runs_csv(path)
        assert [s.run_id for s in loaded] == [0, 1, 2]
        for orig, back in zip(summaries, loaded):
            assert back.seed == orig.seed
            for cycle, stats in orig.checkpoints.items():
                for key, value in stats.items():
                    got = back.checkpoints[cycle][key]
                    if math.isnan(value):
                        assert math.isnan(got)
                    else:
                        assert got == pytest.approx(value, rel=1e-15)


def _summary(run_id, values):
    s = RunSummary(run_id=run_id, seed=run_id)
    s.checkpoints[20] = values
    return s


class TestAggregate:
    def test_single_run_has_zero_spread(self):
        summary = run_one(derive_seed(0, 0), small_sim(), run_id=0)
        rows = {r["statistic"]: r for r in aggregate_summaries([summary])}
        for cycle in (5, 10):
            for key, value in summary.checkpoints[cycle].items():
                col = f"c{cycle}_{key}"
                if math.isnan(value):
                    assert math.isnan(rows["average"][col])
                    continue
                assert rows["average"][col] == pytest.approx(value)
                assert rows["st_dev"][col] == 0.0
                assert rows["median"][col] == pytest.approx(value)
                assert rows["maxima"][col] == rows["minima"][col]

    def test_two_row_arithmetic(self):
        base = {k: math.nan for k in
                ("io_in_top10", "rbv_in_top10", "best_io", "best_rbv",
                 "best_is_rbv", "avg5_io", "avg5_rbv", "avg10_io", "avg10_rbv",
                 "avg_all_io", "avg_all_rbv", "rd_best", "rd_avg5", "rd_avg10",
                 "rd_all", "n_wallflower", "n_convenience", "n_soul_mate",
                 "perf_wallflower", "perf_convenience", "perf_soul_mate")}
        a = dict(base, best_io=10.0, rd_best=0.5)
        b = dict(base, best_io=20.0, rd_best=-0.25)
        rows = {
            r["statistic"]: r
            for r in aggregate_summaries([_summary(0, a), _summary(1, b)])
        }
        assert rows["average"]["c20_best_io"] == pytest.approx(15.0)
        assert rows["st_dev"]["c20_best_io"] == pytest.approx(5.0)
        assert rows["variance"]["c20_best_io"] == pytest.approx(25.0)
        assert rows["median"]["c20_best_io"] == pytest.approx(15.0)
        assert rows["maxima"]["c20_best_io"] == 20.0
        assert rows["minima"]["c20_best_io"] == 10.0
        # IO-vs-RBV win tallies come from the relative-difference signs
        assert rows["n_io_gt_rbv"]["c20_rd_best"] == 1.0
        assert rows["n_rbv_gt_io"]["c20_rd_best"] == 1.0
        assert rows["pct_io_gt_rbv"]["c20_rd_best"] == pytest.approx(50.0)

    def test_aggregate_is_pure_function_of_rows(self, tmp_path):
        batch = BatchConfig(n_runs=4, base_seed=9, sim=small_sim())
        out = os.path.join(tmp_path, "out")
        _, aggregate = run_batch(batch, out_dir=out)
        reloaded = read_runs_csv(os.path.join(out, "runs.csv"))
        assert aggregate_summaries(reloaded) == aggregate


class TestRunBatch:
    def test_order_by_run_id_and_seed_contract(self, tmp_path):
        batch = BatchConfig(n_runs=5, base_seed=3, sim=small_sim())
        summaries, _ = run_batch(batch)
        assert [s.run_id for s in summaries] == list(range(5))
        assert [s.seed for s in summaries] == [derive_seed(3, i) for i in range(5)]

    def test_parallel_and_serial_outputs_are_byte_identical(self, tmp_path):
        outputs = {}
        for workers in (1, 2):
            out = os.path.join(tmp_path, f"w{workers}")
            batch = BatchConfig(
                n_runs=6, base_seed=17, sim=small_sim(), parallelism=workers
            )
            run_batch(batch, out_dir=out)
            outputs[workers] = {
                name: open(os.path.join(out, name), "rb").read()
                for name in ("runs.csv", "aggregate.csv")
            }
        assert outputs[1] == outputs[2]

    def test_validation_errors(self):
        with pytest.raises(ValueError):
            BatchConfig(n_runs=0).validate()
        with pytest.raises(ValueError):
            BatchConfig(base_seed=-1).validate()
        with pytest.raises(ValueError):
            BatchConfig(parallelism=0).validate()
