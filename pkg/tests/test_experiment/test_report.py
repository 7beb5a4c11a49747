# -*- coding: utf-8 -*-
"""Testing report tables from results and aggregate files."""

import numpy as np
import pandas as pd
import pytest

import stochmapf
from stochmapf.experiment import LearningEntry, LearningReport, report
from stochmapf.experiment import _experiment_io

smapf = stochmapf.SMAPFDialog()
logger = smapf.basiclogger(__name__)


def _results(mode, timeouts, use_or=True, use_pu=True, conflicts=None):
    ntasks = len(timeouts)
    conflicts = conflicts if conflicts is not None else [0] * ntasks
    return pd.DataFrame(
        {
            "task_id": list(range(ntasks)),
            "mode": mode,
            "use_or": use_or,
            "use_pu": use_pu,
            "t_ci": 100.0,
            "vertex_conflicts": conflicts,
            "edge_waits": [1] * ntasks,
            "flowtime": [100.0 + 10.0 * idx for idx in range(ntasks)],
            "init_calc_ms": [20.0] * ntasks,
            "init_timeout": timeouts,
            "replans": [2] * ntasks,
            "online_calc_ms": [10.0] * ntasks,
            "rmse_a": [1.0] * ntasks,
            "rmse_b": [0.1] * ntasks,
            "init_status": [
                "timeout_best_effort" if tmo else "conflict_free" for tmo in timeouts
            ],
            "no_error": False,
            "n_agents": 4,
            "seed": 0,
        }
    )


@pytest.fixture(name="results_files")
def fixture_results_files(tmp_path):
    cbs = tmp_path / "cbs.csv"
    gstt = tmp_path / "gstt.csv"
    _experiment_io.export_csv(_results("cbs", [False, True, False], False, False), cbs)
    _experiment_io.export_csv(
        _results("gstt", [False, False, False], conflicts=[0, 2, 1]), gstt
    )
    return [cbs, gstt]


@pytest.fixture(name="aggregate_file")
def fixture_aggregate_file(tmp_path):
    learn = LearningReport(milestones=(1,))
    for rmse in (3.0, 2.0):
        entry = LearningEntry(
            rmse,
            rmse / 10.0,
            [(0, 1), (1, 2)],
            np.array([0.8, 0.4]),
            np.array([0.9, np.nan]),
            np.array([2, 8]),
        )
        learn.add(entry, 1, 50.0)
    learn.finalize()
    wfile = tmp_path / "gstt_agg.json"
    _experiment_io.export_aggregate({}, {"n_tasks": 2}, learn.to_dict(), wfile)
    return wfile


def test_config_label():
    assert report.config_label({"mode": "gstt", "use_or": True, "use_pu": True}) == (
        "gstt+OR+PU"
    )
    assert report.config_label({"mode": "cbs", "use_or": "False"}) == "cbs"
    assert report.config_label({"mode": "stt", "use_pu": "True", "no_error": 1}) == (
        "stt+PU+noerror"
    )


def test_read_results(results_files):
    dfr = report.read_results(results_files)
    assert len(dfr) == 6
    assert set(dfr["label"]) == {"cbs", "gstt+OR+PU"}
    assert set(dfr["source"]) == {"cbs", "gstt"}


def test_read_results_errors(tmp_path):
    with pytest.raises(stochmapf.InstanceFileError):
        report.read_results([])

    with pytest.raises(stochmapf.InstanceFileError):
        report.read_results([tmp_path / "missing.csv"])

    empty = tmp_path / "empty.csv"
    empty.write_text("")
    with pytest.raises(stochmapf.InstanceFileError):
        report.read_results([empty])


def test_summary_table(results_files):
    table = report.summary_table(report.read_results(results_files))
    assert table["label"].tolist() == ["cbs", "gstt+OR+PU"]

    gstt = table.set_index("label").loc["gstt+OR+PU"]
    assert gstt["n_tasks"] == 3
    assert gstt["mean_vertex_conflicts"] == 1.0
    assert gstt["mean_flowtime"] == 110.0
    assert gstt["timeout_rate"] == 0.0
    assert gstt["mean_online_calc_ms"] == 5.0

    cbs = table.set_index("label").loc["cbs"]
    assert cbs["timeout_rate"] == pytest.approx(1.0 / 3.0)


def test_difficulty_table(results_files):
    dfr = report.read_results(results_files)
    assert report.difficult_tasks(dfr) == {1}

    table = report.difficulty_table(dfr)
    gstt = table[table["label"] == "gstt+OR+PU"].set_index("group")
    assert gstt.loc["easy", "n_tasks"] == 2
    assert gstt.loc["difficult", "n_tasks"] == 1
    assert gstt.loc["difficult", "mean_vertex_conflicts"] == 2.0
    assert gstt.loc["easy", "n_conflict_free"] == 2

    cbs = table[table["label"] == "cbs"].set_index("group")
    assert cbs.loc["difficult", "n_timeouts"] == 1
    assert cbs.loc["difficult", "n_conflict_free"] == 0


def test_difficulty_table_without_cbs(results_files):
    dfr = report.read_results(results_files[1:])
    table = report.difficulty_table(dfr)
    assert table["group"].tolist() == ["easy"]
    assert table["n_tasks"].tolist() == [3]


def test_learning_tables(aggregate_file, line3):
    aggregate = stochmapf.aggregate_from_file(aggregate_file)

    curves = report.learning_curves(aggregate)
    assert curves["rmse_a"].tolist() == [3.0, 2.0]

    hist = report.observation_histogram(aggregate, bins=4)
    assert list(hist.columns) == ["milestone", "bin_lo", "bin_hi", "count"]
    assert sorted(set(hist["milestone"])) == [1, 2]
    assert hist.groupby("milestone")["count"].sum().tolist() == [2, 2]
    assert hist["bin_hi"].max() == 8.0

    ratios = report.error_ratio_map(aggregate, graph=line3)
    assert len(ratios) == 4
    assert ratios["x_mid"].tolist() == [0.5, 1.5, 0.5, 1.5]
    assert np.isnan(ratios["e_b"].iloc[1])


def test_write_report(tmp_path, results_files, aggregate_file):
    outdir = tmp_path / "report"
    outdir.mkdir()
    written = report.write_report(
        results_files, outdir, aggregate_files=[aggregate_file]
    )
    names = sorted(path.name for path in written)
    assert names == [
        "difficulty.csv",
        "gstt_agg_error_ratio.csv",
        "gstt_agg_histogram.csv",
        "gstt_agg_learning.csv",
        "summary.csv",
    ]
    for path in written:
        assert path.is_file()

    summary = pd.read_csv(outdir / "summary.csv")
    assert len(summary) == 2
