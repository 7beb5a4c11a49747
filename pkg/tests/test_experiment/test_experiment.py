# -*- coding: utf-8 -*-
"""Testing task execution, suites and aggregates."""

import math

import pandas as pd
import pytest

import stochmapf
from stochmapf.delay.delay_model import PriorConfig
from stochmapf.experiment import (
    ExperimentConfig,
    aggregate,
    make_solver,
    replan_policy,
    run_suite,
    run_task,
)
from stochmapf.experiment import _experiment_io

smapf = stochmapf.SMAPFDialog()
logger = smapf.basiclogger(__name__)

FAST = dict(n_samples=50, t_limit=5.0, max_nodes=30)


# ======================================================================================
# Configuration and policy
# ======================================================================================


def test_config_defaults_and_validation():
    config = ExperimentConfig()
    assert config.mode == "gstt"
    assert config.use_or and config.use_pu and not config.no_error
    assert config.epsilon == 0.01
    assert config.t_ci == 100.0
    assert config.c_penalty == 1.0
    assert config.t_limit == 10.0
    assert config.prior == PriorConfig(1.0, 0.2, 0.1, 0.1)
    assert config.n_samples == 1000

    for bad in (
        dict(mode="dijkstra"),
        dict(epsilon=0.0),
        dict(t_ci=0.0),
        dict(t_limit=-1.0),
        dict(n_samples=0),
        dict(seed=-3),
    ):
        with pytest.raises(ValueError):
            ExperimentConfig(**bad)


def test_config_derived_settings():
    config = ExperimentConfig(mode="stt", prior=(2.0, 0.5, 0.3, 0.3), seed=9, **FAST)
    assert isinstance(config.prior, PriorConfig)

    pcfg = config.planner_config()
    assert pcfg.mode == "stt"
    assert pcfg.seed == 9
    assert pcfg.n_samples == 50
    assert pcfg.max_nodes == 30
    assert config.planner_config(seed=4).seed == 4

    scfg = config.sim_config(12, record_trace=True)
    assert scfg.seed == 12
    assert scfg.record_trace
    assert scfg.c_penalty == 1.0

    data = config.as_dict()
    assert data["prior"] == [2.0, 0.5, 0.3, 0.3]
    assert data["mode"] == "stt"


def test_replan_policy():
    assert replan_policy(100.0, 0.0, 100.0)
    assert not replan_policy(99.9, 0.0, 100.0)
    assert replan_policy(250.0, 150.0, 100.0)

    class _Clock:
        clock = 42.0

    assert replan_policy(_Clock(), 40.0, 2.0)
    assert not replan_policy(_Clock(), 41.0, 2.0)


def test_make_solver(small_instance):
    solver = make_solver(small_instance, ExperimentConfig())
    assert solver.learn
    assert not solver.models.frozen

    solver = make_solver(small_instance, ExperimentConfig(use_pu=False))
    assert not solver.learn

    solver = make_solver(small_instance, ExperimentConfig(no_error=True))
    assert not solver.learn
    assert solver.models.frozen
    key = solver.models.keys[0]
    assert solver.models.map_params(*key) == small_instance.true_params[key]


# ======================================================================================
# run_task
# ======================================================================================


def test_run_task_zero_delay_cbs(small_instance):
    config = ExperimentConfig(mode="cbs", use_or=False, zero_delay=True, **FAST)
    solver = make_solver(small_instance, config)
    task = small_instance.tasks[0]
    metrics = run_task(
        small_instance.graph, small_instance.true_params, task, solver, config
    )
    assert metrics.task_id == task.task_id
    assert metrics.n_agents == 2
    assert metrics.replan_count == 0
    assert metrics.total_online_calc_time == 0.0
    assert metrics.flowtime >= metrics.lower_bound
    assert metrics.init_calc_ms == pytest.approx(1000.0 * metrics.init_calc_time)
    if metrics.init_status == "conflict_free":
        assert metrics.vertex_conflicts == 0
        assert metrics.edge_waits == 0
    assert sum(solver.traversals.values()) == 0


def test_run_task_with_replanning(tmp_path, small_instance):
    config = ExperimentConfig(mode="gstt", t_ci=1.0, **FAST)
    solver = make_solver(small_instance, config)
    task = small_instance.tasks[1]
    trace = tmp_path / "trace.jsonl"
    metrics = run_task(
        small_instance.graph,
        small_instance.true_params,
        task,
        solver,
        config,
        task_index=1,
        trace_file=trace,
    )
    assert metrics.replan_count >= 1
    assert metrics.online_calc_ms >= 0.0
    assert metrics.flowtime >= metrics.lower_bound
    assert trace.is_file()

    records = stochmapf.trace_from_file(trace)
    narrivals = sum(rec["kind"] == "arrival_at_vertex" for rec in records)
    assert sum(solver.traversals.values()) == narrivals
    assert solver.models.total_observations == narrivals


def test_run_task_without_learning_counts_traversals(small_instance):
    config = ExperimentConfig(mode="stt", use_or=False, use_pu=False, **FAST)
    solver = make_solver(small_instance, config)
    run_task(
        small_instance.graph,
        small_instance.true_params,
        small_instance.tasks[0],
        solver,
        config,
    )
    assert sum(solver.traversals.values()) > 0
    for key in solver.models.keys:
        assert solver.models.state(*key).n_obs == 0


def test_run_task_no_solution_gets_task_id(monkeypatch, small_instance):
    config = ExperimentConfig(**FAST)
    solver = make_solver(small_instance, config)

    def _fail(instance, seed=None):
        raise stochmapf.NoSolutionError("no path", agent=1)

    monkeypatch.setattr(solver, "find_solution", _fail)
    task = small_instance.tasks[2]
    with pytest.raises(stochmapf.NoSolutionError) as err:
        run_task(
            small_instance.graph, small_instance.true_params, task, solver, config
        )
    assert err.value.task_id == task.task_id
    assert err.value.agent == 1


# ======================================================================================
# run_suite
# ======================================================================================


def test_run_suite(tmp_path, small_instance):
    config = ExperimentConfig(mode="gstt", seed=3, t_ci=20.0, **FAST)
    result = run_suite(small_instance, config)
    assert result.ntasks == 3
    assert len(result.metrics) == 3
    assert result.learning.ntasks == 3
    assert list(result.learning.snapshots) == [3]

    dfr = result.dataframe()
    assert list(dfr.columns) == _experiment_io.COLUMNS
    assert len(dfr) == 3
    assert (dfr["mode"] == "gstt").all()
    assert (dfr["seed"] == 3).all()

    agg = result.aggregates()
    assert agg["n_tasks"] == 3
    assert agg["mean_flowtime"] == pytest.approx(dfr["flowtime"].mean())

    meta = result.metadata.get_metadata()
    assert meta["_required_"]["mode"] == "gstt"
    assert meta["_required_"]["prior"] == [1.0, 0.2, 0.1, 0.1]
    assert meta["_optional_"]["md5sum"] == small_instance.generate_hash()
    assert meta["_freeform_"]["n_tasks"] == 3

    text = result.describe(flush=False)
    assert "Mean flowtime" in text

    csvfile, jsonfile = result.to_files(tmp_path, stem="gstt")
    back = stochmapf.results_from_file(csvfile)
    assert len(back) == 3
    assert back["flowtime"].tolist() == pytest.approx(dfr["flowtime"].tolist())
    data = stochmapf.aggregate_from_file(jsonfile)
    assert data["aggregates"]["n_tasks"] == 3
    assert len(data["learning"]["rmse_a"]) == 3


def test_run_suite_from_file(tmp_path, small_instance):
    wfile = tmp_path / "instance.json"
    small_instance.to_file(wfile)
    config = ExperimentConfig(mode="cbs", use_or=False, **FAST)
    result = run_suite(wfile, config, n_tasks=1)
    assert result.ntasks == 1
    assert result.metadata.opt.source == str(wfile)

    with pytest.raises(ValueError):
        run_suite(wfile, config, n_tasks=4)


def test_learning_flags_change_rmse(small_instance):
    base = dict(mode="stt", use_or=False, seed=1, **FAST)

    frozen = run_suite(small_instance, ExperimentConfig(use_pu=False, **base))
    assert len(set(frozen.learning.rmse_a.tolist())) == 1

    learned = run_suite(small_instance, ExperimentConfig(use_pu=True, **base))
    assert learned.learning.rmse_a[-1] != frozen.learning.rmse_a[-1]

    truth = run_suite(small_instance, ExperimentConfig(no_error=True, **base))
    assert truth.learning.rmse_a.tolist() == [0.0, 0.0, 0.0]
    assert truth.learning.rmse_b.tolist() == [0.0, 0.0, 0.0]


def test_models_persist_between_suites(small_instance):
    config = ExperimentConfig(mode="stt", use_or=False, **FAST)
    first = run_suite(small_instance, config, n_tasks=1)
    nobs = first.solver.models.total_observations
    assert nobs > 0
    second = run_suite(small_instance, config, n_tasks=1, solver=first.solver)
    assert second.solver.models.total_observations > nobs


def test_run_suite_is_deterministic(small_instance):
    config = ExperimentConfig(mode="gstt", seed=5, t_ci=15.0, **FAST)
    cols = ["vertex_conflicts", "edge_waits", "flowtime", "replans", "rmse_a"]
    first = run_suite(small_instance, config).dataframe()[cols]
    second = run_suite(small_instance, config).dataframe()[cols]
    pd.testing.assert_frame_equal(first, second)


# ======================================================================================
# aggregate
# ======================================================================================


def test_aggregate_values():
    dfr = pd.DataFrame(
        {
            "vertex_conflicts": [1, 0, 2],
            "edge_waits": [0, 0, 3],
            "flowtime": [10.0, 20.0, 30.0],
            "init_calc_ms": [5.0, 5.0, 20.0],
            "init_timeout": [False, False, True],
            "replans": [2, 0, 2],
            "online_calc_ms": [4.0, 0.0, 8.0],
        }
    )
    agg = aggregate(dfr)
    assert agg["n_tasks"] == 3
    assert agg["mean_vertex_conflicts"] == 1.0
    assert agg["mean_edge_waits"] == 1.0
    assert agg["mean_flowtime"] == 20.0
    assert agg["mean_init_calc_ms"] == 10.0
    assert agg["timeout_rate"] == pytest.approx(1.0 / 3.0)
    assert agg["mean_online_calc_ms"] == 3.0
    assert agg["mean_replans"] == pytest.approx(4.0 / 3.0)


def test_aggregate_empty():
    agg = aggregate(pd.DataFrame(columns=_experiment_io.COLUMNS))
    assert agg["n_tasks"] == 0
    assert math.isnan(agg["mean_flowtime"])


# ======================================================================================
# Online replanning and parameter updates on a larger instance
# ======================================================================================


@pytest.fixture(name="busy_instance", scope="module")
def fixture_busy_instance():
    return stochmapf.generate_instance(7, 30, 6, 8)


def _suite(instance, **kwargs):
    options = dict(mode="gstt", seed=2, n_samples=100, t_limit=5.0, max_nodes=300)
    options.update(kwargs)
    return run_suite(instance, ExperimentConfig(**options))


@pytest.mark.bigtest
def test_online_replanning_effect(busy_instance):
    """Replanning at checkpoints gives no more conflicts and similar flowtime."""
    without = _suite(busy_instance, use_or=False).aggregates()
    with_or = _suite(busy_instance, use_or=True, t_ci=20.0).aggregates()

    assert with_or["mean_replans"] > 0
    assert without["mean_replans"] == 0
    assert (
        with_or["mean_vertex_conflicts"] <= without["mean_vertex_conflicts"] + 0.3
    )
    assert with_or["mean_flowtime"] <= 1.1 * without["mean_flowtime"]


@pytest.mark.bigtest
def test_parameter_update_effect(busy_instance):
    """Learning the delays lowers the model error and does not hurt the plans."""
    frozen = _suite(busy_instance, use_or=False, use_pu=False)
    learned = _suite(busy_instance, use_or=False, use_pu=True)

    assert learned.learning.rmse_a[-1] <= learned.learning.rmse_a[0]
    assert learned.learning.rmse_a[-1] < frozen.learning.rmse_a[-1]

    agg_frozen = frozen.aggregates()
    agg_learned = learned.aggregates()
    assert (
        agg_learned["mean_vertex_conflicts"]
        <= agg_frozen["mean_vertex_conflicts"] + 0.3
    )
    assert agg_learned["mean_flowtime"] <= 1.1 * agg_frozen["mean_flowtime"]


@pytest.mark.bigtest
def test_initial_search_respects_time_limit(busy_instance):
    t_limit = 0.5
    result = _suite(busy_instance, use_or=False, t_limit=t_limit, max_nodes=None)
    dfr = result.dataframe()
    assert (dfr["init_calc_ms"] <= 1000.0 * t_limit + 2000.0).all()
