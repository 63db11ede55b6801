"""Tests for the coverage-experiment driver and its table emitters."""

import numpy as np
import pytest

from chaosboot import doubling_map
from chaosboot.bootstrap import Method, Side
from chaosboot.errors import ParameterError
from chaosboot.harness import (
    CellStats,
    ExperimentConfig,
    emit_table,
    parse_coverage_csv,
    run_coverage_experiment,
)

_SMALL = dict(
    maps=(doubling_map(),),
    observables=("x",),
    sample_sizes=(25,),
    replications=8,
    B=40,
    sigma_reps=400,
    seed=11,
)


@pytest.fixture(scope="module")
def small_report():
    return run_coverage_experiment(ExperimentConfig(**_SMALL))


class TestExperimentConfig:
    def test_defaults(self):
        cfg = ExperimentConfig(maps=(doubling_map(),))
        assert cfg.sample_sizes == (25, 50, 100)
        assert cfg.replications == 700
        assert cfg.B == 1000
        assert len(cfg.methods) == 4 and len(cfg.sides) == 3

    def test_unknown_observable(self):
        with pytest.raises(ParameterError):
            ExperimentConfig(maps=(doubling_map(),), observables=("x^3",))

    def test_bad_counts(self):
        with pytest.raises(ParameterError):
            ExperimentConfig(maps=(doubling_map(),), replications=0)


class TestCellStats:
    def test_coverage(self):
        assert CellStats(hits=3, reps=4).coverage == 0.75

    def test_empty_cell_is_nan(self):
        assert CellStats().coverage != CellStats().coverage  # nan


class TestRunCoverageExperiment:
    def test_cell_grid(self, small_report):
        keys = set(small_report.cells)
        assert len(keys) == 4 * 3  # methods x sides
        for method in Method:
            for side in Side:
                assert ("doubling", "x", 25, method, side) in keys

    def test_counts_add_up(self, small_report):
        for st in small_report.cells.values():
            assert st.reps + st.failures == _SMALL["replications"]
            assert 0 <= st.hits <= st.reps

    def test_deterministic(self, small_report):
        again = run_coverage_experiment(ExperimentConfig(**_SMALL))
        assert emit_table(again) == emit_table(small_report)
        assert again.config_digest == small_report.config_digest

    def test_threaded_report_identical(self, small_report):
        threaded = run_coverage_experiment(ExperimentConfig(**_SMALL), threads=4)
        assert emit_table(threaded) == emit_table(small_report)

    def test_method_subset_does_not_shift_other_cells(self, small_report):
        # each randomness consumer has its own stream, so dropping the
        # pivoted bootstrap must leave every other cell untouched
        cfg = ExperimentConfig(
            **{**_SMALL, "methods": (Method.T_APPROX, Method.NPBOOT, Method.GAUSSIAN)}
        )
        sub = run_coverage_experiment(cfg)
        for key, st in sub.cells.items():
            full = small_report.cells[key]
            assert (st.hits, st.reps, st.failures) == (full.hits, full.reps, full.failures)

    def test_sigma_table(self, small_report):
        a, sd = small_report.sigma_table[("doubling", "x", 25)]
        assert a == pytest.approx(0.5, abs=0.05)
        assert sd == pytest.approx(0.5, abs=0.1)


class TestEmitTable:
    def test_csv_header_and_rows(self, small_report):
        text = emit_table(small_report, "csv")
        lines = text.strip().split("\n")
        assert lines[0] == "method,h,n,side,map,coverage,reps,hits,failures"
        assert len(lines) == 1 + len(small_report.cells)

    def test_csv_round_trip(self, small_report):
        rows = parse_coverage_csv(emit_table(small_report, "csv"))
        assert len(rows) == len(small_report.cells)
        for row in rows:
            st = small_report.cells[
                (
                    row["map"],
                    row["h"],
                    int(row["n"]),
                    Method(row["method"]),
                    Side(row["side"]),
                )
            ]
            assert int(row["hits"]) == st.hits
            assert int(row["reps"]) == st.reps
            assert int(row["failures"]) == st.failures
            assert float(row["coverage"]) == pytest.approx(st.coverage, abs=5e-4)

    def test_text_layout(self, small_report):
        text = emit_table(small_report, "text")
        # one table per (map, side) combination present in the report
        assert text.count("# ") == 3
        assert "# two-sided 95% confidence intervals, doubling map" in text
        for m in ("t", "npboot", "Gaussian", "pboot"):
            assert f"\n{m:>10s}  " in text or text.startswith(f"{m:>10s}  ")

    def test_unknown_format(self, small_report):
        with pytest.raises(ParameterError):
            emit_table(small_report, "json")
