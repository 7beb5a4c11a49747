# -*- coding: utf-8 -*-
"""Testing the EdgeModels class."""

import numpy as np
import pytest

import stochmapf
from stochmapf.delay.delay_model import GammaParams, PriorConfig, sample_delay

smapf = stochmapf.SMAPFDialog()
logger = smapf.basiclogger(__name__)


def test_init_from_graph(line3):
    models = stochmapf.EdgeModels(line3)
    assert models.nedges == 2
    assert models.keys == [(0, 1), (1, 2)]
    assert models.prior == PriorConfig.default()
    assert not models.frozen
    assert models.total_observations == 0

    params = models.map_params(1, 0)
    assert params.shape == pytest.approx(1.0, abs=1e-8)
    assert params.scale == pytest.approx(0.2, abs=1e-8)


def test_observe_updates_one_edge(line3):
    models = stochmapf.EdgeModels(line3)
    before = models.map_params(0, 1)
    for delay in (1.2, 0.8, 1.1, 0.9, 1.0):
        models.observe(1, 0, delay)

    assert models.observations(0, 1) == 5
    assert models.state(0, 1).n_obs == 5
    assert models.state(1, 2).n_obs == 0
    assert models.map_params(0, 1) != before
    assert models.map_params(0, 1).mean == pytest.approx(1.0, rel=0.1)
    assert models.map_params(1, 2).scale == pytest.approx(0.2, abs=1e-8)

    with pytest.raises(stochmapf.NonPositiveObservationError):
        models.observe(0, 1, 0.0)


def test_learns_true_parameters(small_instance):
    rng = np.random.default_rng(77)
    models = stochmapf.EdgeModels(small_instance.graph)
    for key, params in small_instance.true_params.items():
        for delay in sample_delay(params, rng, size=2000):
            models.observe(*key, delay)

    for key, params in small_instance.true_params.items():
        assert models.map_params(*key).mean == pytest.approx(params.mean, rel=0.02)

    err = models.errors(small_instance.true_params)
    assert err["keys"] == models.keys
    assert np.all(err["n_obs"] == 2000)
    assert np.nanmax(err["e_b"]) < 1.0


def test_from_truth_is_frozen(small_instance):
    truth = small_instance.true_params
    models = stochmapf.EdgeModels.from_truth(truth)
    assert models.frozen

    key = models.keys[0]
    models.observe(*key, 100.0)
    assert models.observations(*key) == 1
    assert models.state(*key).n_obs == 0
    assert models.map_params(*key) == truth[key]
    assert models.all_map_params() == {k: truth[k] for k in models.keys}
    assert models.edge_prior(*key).a_prior == truth[key].shape

    err = models.errors(truth)
    assert err["rmse_a"] == 0.0
    assert err["rmse_b"] == 0.0
    assert np.all(err["e_a"] == 0.0)


def test_literal_prior_uses_prior_mode(line3):
    models = stochmapf.EdgeModels(line3, literal=True)
    params = models.map_params(0, 1)
    assert params == GammaParams(1.0, 0.2)


def test_copy_is_independent(line3):
    models = stochmapf.EdgeModels(line3)
    models.observe(0, 1, 1.0)
    other = models.copy()
    other.observe(0, 1, 2.0)
    assert models.observations(0, 1) == 1
    assert other.observations(0, 1) == 2
    assert models.generate_hash() != other.generate_hash()
    assert models.generate_hash() == models.copy().generate_hash()


def test_dump_and_describe(line3):
    models = stochmapf.EdgeModels(line3)
    models.observe(1, 2, 0.5)
    rows = models.dump()
    assert [(row["u"], row["v"]) for row in rows] == [(0, 1), (1, 2)]
    assert rows[1]["n_obs"] == 1
    assert rows[1]["n_seen"] == 1
    assert set(rows[0]) >= {"a_map", "b_map", "log_p", "q", "r", "s"}

    text = models.describe(flush=False)
    assert "Number of edges" in text


def test_file_roundtrip(tmp_path, line3):
    models = stochmapf.EdgeModels(line3, prior=PriorConfig(2.0, 0.5, 0.2, 0.2))
    for delay in (0.7, 1.3, 1.1):
        models.observe(0, 1, delay)
    wfile = tmp_path / "learned.json"
    models.to_file(wfile)

    back = stochmapf.edge_models_from_file(wfile)
    assert back.prior == models.prior
    assert back.keys == models.keys
    assert back.generate_hash() == models.generate_hash()
    assert back.observations(0, 1) == 3
    assert back.map_params(0, 1).shape == pytest.approx(models.map_params(0, 1).shape)


def test_frozen_file_roundtrip(tmp_path, small_instance):
    models = stochmapf.EdgeModels.from_truth(small_instance.true_params)
    wfile = tmp_path / "truth.json"
    models.to_file(wfile)
    back = stochmapf.edge_models_from_file(wfile)
    assert back.frozen
    for key in models.keys:
        assert back.map_params(*key).shape == pytest.approx(
            models.map_params(*key).shape, rel=1e-8
        )


def test_file_errors(tmp_path):
    with pytest.raises(stochmapf.InstanceFileError):
        stochmapf.edge_models_from_file(tmp_path / "nosuchfile.json")

    wfile = tmp_path / "broken.json"
    wfile.write_text('{"prior": [1.0, 0.2, 0.1, 0.1], "edges": [{"u": 0}]}')
    with pytest.raises(stochmapf.InstanceFileError):
        stochmapf.edge_models_from_file(wfile)
