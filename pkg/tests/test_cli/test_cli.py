# -*- coding: utf-8 -*-
"""Testing the stochmapf command line."""

import json

import pandas as pd
import pytest

import stochmapf
from stochmapf import cli

smapf = stochmapf.SMAPFDialog()
logger = smapf.basiclogger(__name__)

FAST = ["--t-limit-ms", "2000", "--mc-samples", "50", "--max-nodes", "30"]


@pytest.fixture(name="mapfile")
def fixture_mapfile(tmp_path):
    args = ["generate", "--seed", "11", "--vertices", "12", "--agents", "2"]
    code = cli.main(args + ["--tasks", "3", "--out", str(tmp_path)])
    assert code == cli.EXIT_OK
    return tmp_path / "instance.json"


# ======================================================================================
# generate
# ======================================================================================


def test_generate(tmp_path, capsys, mapfile):
    assert "12 vertices" in capsys.readouterr().out

    inst = stochmapf.instance_from_file(mapfile)
    assert inst.graph.nvertices == 12
    assert inst.ntasks == 3
    assert inst.nagents == 2

    other = tmp_path / "other"
    other.mkdir()
    args = ["generate", "--seed", "11", "--vertices", "12", "--agents", "2"]
    args += ["--tasks", "3", "--name", "again", "--out", str(other)]
    assert cli.main(args) == cli.EXIT_OK
    assert (other / "again.json").read_bytes() == mapfile.read_bytes()


def test_generate_errors(tmp_path, monkeypatch):
    base = ["generate", "--seed", "1", "--out", str(tmp_path)]
    assert cli.main(base + ["--vertices", "4", "--agents", "3"]) == cli.EXIT_USAGE
    assert cli.main(base + ["--vertices", "x", "--agents", "1"]) == cli.EXIT_USAGE

    def _fail(*args, **kwargs):
        raise stochmapf.GenerationFailedError("not connected")

    monkeypatch.setattr(cli, "generate_instance", _fail)
    assert cli.main(base + ["--vertices", "10", "--agents", "1"]) == (
        cli.EXIT_GENERATION
    )


def test_usage_exit_codes(capsys):
    assert cli.main(["--help"]) == cli.EXIT_OK
    assert cli.main([]) == cli.EXIT_USAGE
    assert cli.main(["teleport"]) == cli.EXIT_USAGE
    capsys.readouterr()

    assert cli.main(["--version"]) == cli.EXIT_OK
    assert "stochmapf version" in capsys.readouterr().out


# ======================================================================================
# run
# ======================================================================================


def test_config_from_args_defaults():
    args = cli.build_parser().parse_args(["run", "--map", "m.json", "--seed", "3"])
    config = cli.config_from_args(args)
    assert config.mode == "gstt"
    assert not config.use_or
    assert not config.use_pu
    assert config.t_limit == 10.0
    assert config.seed == 3
    assert cli.default_stem(config) == "gstt_tci100"

    args = cli.build_parser().parse_args(
        ["run", "--map", "m.json", "--seed", "3", "--or", "--pu", "--prior", "2,1,1,1"]
    )
    config = cli.config_from_args(args)
    assert config.use_or and config.use_pu
    assert config.prior == stochmapf.PriorConfig(2.0, 1.0, 1.0, 1.0)
    assert cli.default_stem(config) == "gstt_or_pu_tci100"


def test_run(tmp_path, mapfile):
    out = tmp_path / "res"
    out.mkdir()
    args = ["run", "--map", str(mapfile), "--seed", "1", "--mode", "stt", "--pu"]
    args += ["--tasks", "2", "--stem", "stt", "--out", str(out)] + FAST
    assert cli.main(args) == cli.EXIT_OK

    dfr = stochmapf.results_from_file(out / "stt.csv")
    assert len(dfr) == 2
    assert (dfr["mode"] == "stt").all()
    agg = stochmapf.aggregate_from_file(out / "stt.json")
    assert agg["_metadata_"]["_required_"]["seed"] == 1
    assert agg["aggregates"]["n_tasks"] == 2


def test_run_errors(tmp_path, mapfile, monkeypatch, capsys):
    missing = ["run", "--map", str(tmp_path / "nomap.json"), "--seed", "1"]
    assert cli.main(missing) == cli.EXIT_INPUT

    base = ["run", "--map", str(mapfile)]
    assert cli.main(base) == cli.EXIT_USAGE
    assert cli.main(base + ["--seed", "1", "--tasks", "9"]) == cli.EXIT_USAGE
    assert cli.main(base + ["--seed", "1", "--prior", "1,2"]) == cli.EXIT_USAGE

    def _fail(*args, **kwargs):
        raise stochmapf.NoSolutionError("no path", agent=0, task_id=42)

    monkeypatch.setattr(cli, "run_suite", _fail)
    capsys.readouterr()
    assert cli.main(base + ["--seed", "1"]) == cli.EXIT_NO_SOLUTION
    assert "task 42" in capsys.readouterr().err


# ======================================================================================
# sweep
# ======================================================================================


def test_sweep_cells():
    argv = ["sweep", "--map", "m.json", "--seed", "1", "--mode", "stt,cbs"]
    args = cli.build_parser().parse_args(argv + ["--t-ci", "50,10,10", "--both-or"])
    cells = cli.sweep_cells(args)
    assert len(cells) == 8
    assert cells[0] == {
        "mode": "cbs",
        "t_ci": 10.0,
        "n_agents": None,
        "use_or": False,
        "use_pu": False,
    }
    assert [cell["use_or"] for cell in cells[:2]] == [False, True]


def test_sweep(tmp_path, mapfile):
    out = tmp_path / "sweep"
    out.mkdir()
    args = ["sweep", "--map", str(mapfile), "--seed", "2", "--mode", "cbs,stt"]
    args += ["--t-ci", "20", "--agents", "2,3", "--tasks", "1", "--out", str(out)]
    args += FAST
    assert cli.main(args) == cli.EXIT_OK

    table = pd.read_csv(out / "sweep.csv")
    assert len(table) == 4
    assert table["mode"].tolist() == ["cbs", "cbs", "stt", "stt"]
    assert table["n_agents"].tolist() == [2, 3, 2, 3]

    with open(out / "sweep.json", encoding="utf-8") as stream:
        data = json.load(stream)
    assert len(data["learning"]["cells"]) == 4
    assert data["_metadata_"]["_freeform_"]["cells"] == 4


def test_sweep_errors(tmp_path, mapfile):
    base = ["sweep", "--map", str(mapfile), "--seed", "1", "--out", str(tmp_path)]
    assert cli.main(base + ["--t-ci", ","]) == cli.EXIT_USAGE
    assert cli.main(base + ["--mode", "astar"]) == cli.EXIT_USAGE

    nomap = ["sweep", "--map", str(tmp_path / "nomap.json"), "--seed", "1"]
    assert cli.main(nomap) == cli.EXIT_INPUT


# ======================================================================================
# report
# ======================================================================================


def test_report(tmp_path, mapfile, capsys):
    res = tmp_path / "res"
    res.mkdir()
    for mode in ("cbs", "gstt"):
        args = ["run", "--map", str(mapfile), "--seed", "1", "--mode", mode]
        args += ["--tasks", "2", "--stem", mode, "--out", str(res)] + FAST
        assert cli.main(args) == cli.EXIT_OK

    rep = tmp_path / "rep"
    rep.mkdir()
    args = ["report", str(res / "cbs.csv"), str(res / "gstt.csv")]
    args += ["--aggregate", str(res / "gstt.json"), "--map", str(mapfile)]
    args += ["--out", str(rep)]
    capsys.readouterr()
    assert cli.main(args) == cli.EXIT_OK
    assert "mean_flowtime" in capsys.readouterr().out

    for name in ("summary", "difficulty", "gstt_learning", "gstt_error_ratio"):
        assert (rep / (name + ".csv")).is_file()

    ratios = pd.read_csv(rep / "gstt_error_ratio.csv")
    assert "x_mid" in ratios.columns


def test_report_errors(tmp_path):
    empty = tmp_path / "empty.csv"
    empty.write_text("")
    assert cli.main(["report", str(empty), "--out", str(tmp_path)]) == cli.EXIT_INPUT
    assert cli.main(["report", str(tmp_path / "none.csv")]) == cli.EXIT_INPUT
