# -*- coding: utf-8 -*-
"""Report tables and plot-ready CSV from results files.

Nothing is rendered here; every function returns a pandas DataFrame that a
plotting tool can consume directly.

Example::

    >>> from stochmapf.experiment import report
    >>> dfr = report.read_results(["gstt.csv", "stt.csv"])
    >>> report.summary_table(dfr)

"""

import pathlib

import numpy as np
import pandas as pd

from stochmapf.common import SMAPFDialog
from stochmapf.common.exceptions import InstanceFileError
from stochmapf.experiment import _experiment_io
from stochmapf.experiment.learning import LearningReport

smapf = SMAPFDialog()
logger = smapf.functionlogger(__name__)

CONFIG_COLUMNS = ["mode", "use_or", "use_pu", "no_error", "t_ci", "n_agents"]


def config_label(row):
    """Short configuration name, e.g. "gstt+OR+PU"."""
    label = str(row["mode"])
    if _as_bool(row.get("use_or", False)):
        label += "+OR"
    if _as_bool(row.get("use_pu", False)):
        label += "+PU"
    if _as_bool(row.get("no_error", False)):
        label += "+noerror"
    return label


def read_results(files):
    """Concatenate results CSV files, adding a "label" and "source" column."""
    frames = []
    for wfile in files:
        dfr = _experiment_io.import_csv(wfile)
        dfr["source"] = pathlib.Path(wfile).stem
        frames.append(dfr)
    if not frames:
        raise InstanceFileError("No results files given")
    dfr = pd.concat(frames, ignore_index=True)
    for col in CONFIG_COLUMNS:
        if col not in dfr.columns:
            dfr[col] = False if col == "no_error" else np.nan
    dfr["label"] = [config_label(row) for _, row in dfr.iterrows()]
    return dfr


def _group_keys(dfr):
    return ["label"] + [
        col for col in ("t_ci", "n_agents") if col in dfr and dfr[col].notna().any()
    ]


def summary_table(dfr):
    """Mean conflicts, waits, flowtime and calc times per configuration.

    One row per configuration (label, t_ci and number of agents).
    """
    dfr = dfr.copy()
    dfr["init_timeout"] = dfr["init_timeout"].map(_as_bool)
    grouped = dfr.groupby(_group_keys(dfr), sort=True, dropna=False)
    table = grouped.agg(
        n_tasks=("task_id", "size"),
        mean_vertex_conflicts=("vertex_conflicts", "mean"),
        mean_edge_waits=("edge_waits", "mean"),
        mean_flowtime=("flowtime", "mean"),
        mean_init_calc_ms=("init_calc_ms", "mean"),
        timeout_rate=("init_timeout", "mean"),
        replans=("replans", "sum"),
        online_calc_ms=("online_calc_ms", "sum"),
    )
    table["mean_online_calc_ms"] = np.where(
        table["replans"] > 0,
        table["online_calc_ms"] / table["replans"].where(table["replans"] > 0, 1),
        0.0,
    )
    table = table.drop(columns=["replans", "online_calc_ms"])
    return table.reset_index()


def difficult_tasks(dfr):
    """Task ids where the CBS baseline timed out in its initial search."""
    cbs = dfr[dfr["mode"] == "cbs"]
    return set(cbs.loc[cbs["init_timeout"].map(_as_bool), "task_id"].astype(int))


def difficulty_table(dfr):
    """Tasks solved conflict free, timeouts and mean flowtime, easy vs difficult.

    A task is difficult when the CBS run on the same task id timed out. Without
    a CBS run in the input every task counts as easy.
    """
    dfr = dfr.copy()
    if not (dfr["mode"] == "cbs").any():
        logger.warning("No CBS results given, all tasks are classified as easy")
    hard = difficult_tasks(dfr)
    dfr["group"] = np.where(dfr["task_id"].astype(int).isin(hard), "difficult", "easy")
    dfr["solved"] = dfr.get("init_status", "") == "conflict_free"
    dfr["init_timeout"] = dfr["init_timeout"].map(_as_bool)

    table = dfr.groupby(_group_keys(dfr) + ["group"], sort=True, dropna=False).agg(
        n_tasks=("task_id", "size"),
        n_conflict_free=("solved", "sum"),
        n_timeouts=("init_timeout", "sum"),
        mean_flowtime=("flowtime", "mean"),
        mean_vertex_conflicts=("vertex_conflicts", "mean"),
    )
    return table.reset_index()


def learning_curves(aggregate):
    """RMSE and running means per task from an aggregate JSON dictionary."""
    return LearningReport.from_dict(aggregate["learning"]).curves()


def observation_histogram(aggregate, bins=10):
    """Histogram of per edge observation counts at each milestone.

    Returns a table milestone, bin_lo, bin_hi, count. The bins are shared over
    all milestones.
    """
    report = LearningReport.from_dict(aggregate["learning"])
    if not report.snapshots:
        return pd.DataFrame(columns=["milestone", "bin_lo", "bin_hi", "count"])

    allobs = np.concatenate([entry.n_obs for entry in report.snapshots.values()])
    top = max(1, int(allobs.max()) if allobs.size else 1)
    edges = np.linspace(0.0, float(top), bins + 1)

    rows = []
    for milestone, entry in report.snapshots.items():
        counts, _ = np.histogram(entry.n_obs, bins=edges)
        for idx, count in enumerate(counts):
            rows.append((milestone, edges[idx], edges[idx + 1], int(count)))
    return pd.DataFrame(rows, columns=["milestone", "bin_lo", "bin_hi", "count"])


def error_ratio_map(aggregate, graph=None):
    """Per edge error ratios at each milestone, with edge midpoints if graph given."""
    report = LearningReport.from_dict(aggregate["learning"])
    frames = []
    for milestone, entry in report.snapshots.items():
        dfr = entry.frame(graph)
        dfr.insert(0, "milestone", milestone)
        frames.append(dfr)
    if not frames:
        return pd.DataFrame(columns=["milestone", "u", "v", "e_a", "e_b", "n_obs"])
    return pd.concat(frames, ignore_index=True)


def write_report(results_files, outdir, aggregate_files=(), graph=None):
    """Write every report table as CSV into outdir, return the written paths.

    Args:
        results_files (list): Results CSV files, at least one.
        outdir (str or Path): Output folder.
        aggregate_files (list): Aggregate JSON files; each gives learning
            curves, histograms and error ratio maps named after its stem.
        graph (Graph): Map for the error ratio midpoints.

    Raises:
        InstanceFileError: A missing or empty input.
    """
    outdir = pathlib.Path(outdir)
    written = []

    dfr = read_results(results_files)
    tables = {"summary": summary_table(dfr), "difficulty": difficulty_table(dfr)}

    for wfile in aggregate_files:
        stem = pathlib.Path(wfile).stem
        aggregate = _experiment_io.import_aggregate(wfile)
        tables[stem + "_learning"] = learning_curves(aggregate)
        tables[stem + "_histogram"] = observation_histogram(aggregate)
        tables[stem + "_error_ratio"] = error_ratio_map(aggregate, graph)

    for name, table in tables.items():
        path = outdir / (name + ".csv")
        _experiment_io.export_csv(table, path)
        written.append(path)
    return written


def _as_bool(value):
    if isinstance(value, str):
        return value.strip().lower() in ("true", "1", "yes")
    if value is None or (isinstance(value, float) and np.isnan(value)):
        return False
    return bool(value)
