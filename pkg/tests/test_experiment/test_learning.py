# -*- coding: utf-8 -*-
"""Testing learning curves, error ratios and milestone snapshots."""

import numpy as np
import pytest

import stochmapf
from stochmapf.delay.delay_model import GammaParams, PriorConfig
from stochmapf.experiment import LearningEntry, LearningReport, milestones, rmse_report
from stochmapf.experiment import Solver

smapf = stochmapf.SMAPFDialog()
logger = smapf.basiclogger(__name__)

TRUTH = {(0, 1): GammaParams(90.0, 1.0 / 30.0), (1, 2): GammaParams(202.5, 0.04)}


def _entry(rmse, keys=((0, 1), (1, 2)), n_obs=(3, 0)):
    return LearningEntry(
        rmse,
        rmse / 10.0,
        list(keys),
        np.array([0.5, np.nan]),
        np.array([1.0, 0.25]),
        np.array(n_obs, dtype=np.int64),
    )


def test_milestones():
    assert milestones(0) == []
    assert milestones(5) == [5]
    assert milestones(10) == [10]
    assert milestones(150) == [10, 100, 150]
    assert milestones(1000) == [10, 100, 1000]
    assert milestones(7, marks=(2, 4)) == [2, 4, 7]


def test_rmse_report_truth_is_zero():
    models = stochmapf.EdgeModels.from_truth(TRUTH)
    entry = rmse_report(models, TRUTH)
    assert entry.rmse_a == 0.0
    assert entry.rmse_b == 0.0
    assert entry.keys == [(0, 1), (1, 2)]
    np.testing.assert_array_equal(entry.e_a, [0.0, 0.0])


def test_rmse_report_prior_ratios_are_one(line3):
    models = stochmapf.EdgeModels(line3)
    entry = rmse_report(models, TRUTH, prior=PriorConfig.default())
    np.testing.assert_allclose(entry.e_a, [1.0, 1.0])
    np.testing.assert_allclose(entry.e_b, [1.0, 1.0])
    assert entry.rmse_a == pytest.approx(
        np.sqrt(((90.0 - 1.0) ** 2 + (202.5 - 1.0) ** 2) / 2.0)
    )


def test_rmse_report_counts_solver_traversals(line3):
    models = stochmapf.EdgeModels(line3)
    solver = Solver(line3, models, learn=False)
    solver.traversals[(0, 1)] += 4
    entry = rmse_report(solver, TRUTH)
    np.testing.assert_array_equal(entry.n_obs, [4, 0])
    assert models.total_observations == 0


def test_entry_frame_with_midpoints(line3):
    frame = _entry(2.0).frame(line3)
    assert list(frame.columns) == ["u", "v", "e_a", "e_b", "n_obs", "x_mid", "y_mid"]
    assert frame["x_mid"].tolist() == [0.5, 1.5]
    assert frame["y_mid"].tolist() == [0.0, 0.0]

    assert "x_mid" not in _entry(2.0).frame().columns


def test_entry_dict_keeps_nan():
    back = LearningEntry.from_dict(_entry(2.0).to_dict())
    assert back.rmse_a == 2.0
    assert back.keys == [(0, 1), (1, 2)]
    assert back.e_a[0] == 0.5
    assert np.isnan(back.e_a[1])
    np.testing.assert_array_equal(back.n_obs, [3, 0])


def test_report_snapshots_and_curves():
    report = LearningReport(milestones=(2, 4))
    for idx in range(5):
        report.add(_entry(float(5 - idx)), idx % 2, 10.0 * (idx + 1))
    report.finalize()

    assert report.ntasks == 5
    assert list(report.snapshots) == [2, 4, 5]
    assert report.snapshots[4].rmse_a == 2.0
    np.testing.assert_allclose(report.rmse_a, [5.0, 4.0, 3.0, 2.0, 1.0])

    conf, flow = report.running_means()
    np.testing.assert_allclose(conf, [0.0, 0.5, 1.0 / 3.0, 0.5, 0.4])
    np.testing.assert_allclose(flow, [10.0, 15.0, 20.0, 25.0, 30.0])

    curves = report.curves()
    assert curves["task"].tolist() == [1, 2, 3, 4, 5]
    assert curves["mean_flowtime"].iloc[-1] == 30.0


def test_report_finalize_without_tasks():
    report = LearningReport()
    report.finalize()
    assert report.ntasks == 0
    assert not report.snapshots
    assert report.curves().empty


def test_report_dict_roundtrip():
    report = LearningReport(milestones=(1,))
    report.add(_entry(3.0), 1, 12.0)
    report.add(_entry(float("nan")), 0, 8.0)
    report.finalize()

    data = report.to_dict()
    assert data["rmse_a"] == [3.0, None]
    assert sorted(data["snapshots"]) == ["1", "2"]

    back = LearningReport.from_dict(data)
    assert back.ntasks == 2
    assert np.isnan(back.rmse_a[1])
    assert list(back.snapshots) == [1, 2]
    np.testing.assert_allclose(back.running_means()[1], [12.0, 10.0])
