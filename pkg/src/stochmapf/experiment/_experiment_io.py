# -*- coding: utf-8 -*-
"""Import/export of experiment results: results CSV and aggregate JSON.

The aggregate JSON layout::

    {"_metadata_": {"required": {...}, "optional": {...}, "_freeform_": {...}},
     "aggregates": {"n_tasks": 100, "mean_vertex_conflicts": 0.7, ...},
     "learning": {"rmse_a": [...], "rmse_b": [...], "snapshots": {...}}}

"""

import json
import pathlib

import pandas as pd

from stochmapf.common import SMAPFDialog, _SMAPFFile
from stochmapf.common.exceptions import InstanceFileError

smapf = SMAPFDialog()
logger = smapf.functionlogger(__name__)

BASE_COLUMNS = [
    "task_id",
    "mode",
    "use_or",
    "use_pu",
    "t_ci",
    "vertex_conflicts",
    "edge_waits",
    "flowtime",
    "init_calc_ms",
    "init_timeout",
    "replans",
    "online_calc_ms",
    "rmse_a",
    "rmse_b",
]

COLUMNS = BASE_COLUMNS + ["init_status", "no_error", "n_agents", "seed"]


def export_suite(result, outdir, stem="results"):
    """Write <stem>.csv and <stem>.json for a SuiteResult, return both paths."""
    outdir = pathlib.Path(outdir)
    csvfile = outdir / (stem + ".csv")
    jsonfile = outdir / (stem + ".json")
    export_csv(result.dataframe(), csvfile)
    export_aggregate(
        result.metadata.get_metadata(),
        result.aggregates(),
        result.learning.to_dict(),
        jsonfile,
    )
    return csvfile, jsonfile


def export_csv(dfr, wfile):
    """Write a results table."""
    xfile = _SMAPFFile(wfile, mode="w")
    xfile.check_folder(raiseerror=OSError)
    dfr.to_csv(xfile.file, index=False)
    logger.info("Wrote %s result rows to %s", len(dfr), xfile.name)


def export_aggregate(metadata, aggregates, learning, wfile):
    """Write the aggregate JSON."""
    xfile = _SMAPFFile(wfile, mode="w")
    xfile.check_folder(raiseerror=OSError)

    data = {"_metadata_": metadata, "aggregates": aggregates, "learning": learning}
    with open(xfile.file, "w", encoding="utf-8") as stream:
        json.dump(_jsonable(data), stream, indent=1)
    logger.info("Wrote aggregates to %s", xfile.name)


def import_csv(wfile):
    """Read a results table; a missing, empty or foreign file is an error."""
    xfile = _SMAPFFile(wfile)
    xfile.check_file(raiseerror=InstanceFileError)

    try:
        dfr = pd.read_csv(xfile.file)
    except (pd.errors.EmptyDataError, pd.errors.ParserError, OSError) as err:
        raise InstanceFileError(
            "Cannot read results {}: {}".format(xfile.name, err)
        ) from err

    missing = [col for col in BASE_COLUMNS if col not in dfr.columns]
    if missing:
        raise InstanceFileError(
            "Results {} lack columns {}".format(xfile.name, missing)
        )
    if dfr.empty:
        raise InstanceFileError("Results file {} has no rows".format(xfile.name))
    return dfr


def import_aggregate(wfile):
    """Read an aggregate JSON, return the dictionary."""
    xfile = _SMAPFFile(wfile)
    xfile.check_file(raiseerror=InstanceFileError)

    try:
        with open(xfile.file, "r", encoding="utf-8") as stream:
            data = json.load(stream)
    except (OSError, ValueError) as err:
        raise InstanceFileError("Cannot read {}: {}".format(xfile.name, err)) from err

    if not isinstance(data, dict) or "learning" not in data:
        raise InstanceFileError("No learning report in {}".format(xfile.name))
    return data


def _jsonable(obj):
    """Convert numpy scalars and NaN for JSON output."""
    if isinstance(obj, dict):
        return {str(key): _jsonable(val) for key, val in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(val) for val in obj]
    if hasattr(obj, "item") and not isinstance(obj, (str, bytes)):
        obj = obj.item()
    if isinstance(obj, float) and obj != obj:
        return None
    return obj
