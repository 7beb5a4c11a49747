# -*- coding: utf-8 -*-
"""Import/export of instance files (JSON).

Layout::

    {"seed": 7,
     "vertices": [{"id": 0, "x": 12, "y": 40}, ...],
     "edges": [{"u": 0, "v": 3, "weight": 5.0,
                "true_shape": 90.0, "true_scale": 0.0333}, ...],
     "tasks": [[{"agent": 0, "start": 4, "goal": 17}, ...], ...],
     "delay_mapping": "moment"}

Edges are listed once per unordered pair.
"""

import json

from stochmapf.common import SMAPFDialog, _SMAPFFile
from stochmapf.common.exceptions import InstanceFileError
from stochmapf.delay.delay_model import GammaParams
from stochmapf.graph.graph import build_graph, edge_key
from stochmapf.graph.path import Task

smapf = SMAPFDialog()
logger = smapf.functionlogger(__name__)


def export_json(instance, wfile):
    """Write an instance file."""
    xfile = _SMAPFFile(wfile, mode="w", obj=instance)
    xfile.check_folder(raiseerror=OSError)

    grf = instance.graph
    edges = []
    for edge in grf.edges:
        params = instance.true_params.get((edge.u, edge.v))
        entry = {"u": edge.u, "v": edge.v, "weight": edge.weight}
        if params is not None:
            entry["true_shape"] = params.shape
            entry["true_scale"] = params.scale
        edges.append(entry)

    data = {
        "seed": instance.seed,
        "vertices": [{"id": vtx.id, "x": vtx.x, "y": vtx.y} for vtx in grf.vertices],
        "edges": edges,
        "tasks": [
            [
                {"agent": agent, "start": start, "goal": goal}
                for agent, start, goal in task.agents()
            ]
            for task in instance.tasks
        ],
        "delay_mapping": instance.delay_mapping,
    }

    with open(xfile.file, "w", encoding="utf-8") as stream:
        json.dump(data, stream, indent=1)
    logger.info("Wrote instance to %s", xfile.name)


def _read_data(wfile):
    xfile = _SMAPFFile(wfile)
    xfile.check_file(raiseerror=InstanceFileError)
    xfile.require_fformat("json", raiseerror=InstanceFileError)
    try:
        with open(xfile.file, "r", encoding="utf-8") as stream:
            return json.load(stream), xfile.name
    except (OSError, ValueError) as err:
        raise InstanceFileError("Cannot read {}: {}".format(xfile.name, err)) from err


def _graph_from_data(data, name):
    try:
        vertices = [(int(vtx["id"]), vtx["x"], vtx["y"]) for vtx in data["vertices"]]
        pairs = [(int(edge["u"]), int(edge["v"])) for edge in data["edges"]]
        weights = [
            edge["weight"] if "weight" in edge else None for edge in data["edges"]
        ]
    except (KeyError, TypeError, ValueError) as err:
        raise InstanceFileError("Malformed graph in {}: {}".format(name, err)) from err

    if any(wgt is None for wgt in weights):
        weights = None
    try:
        return build_graph(vertices, pairs, weights=weights)
    except ValueError as err:
        raise InstanceFileError("Invalid graph in {}: {}".format(name, err)) from err


def import_graph(wfile):
    """Read the graph part of an instance file."""
    data, name = _read_data(wfile)
    return _graph_from_data(data, name)


def import_json(wfile):
    """Read an instance file, return dict of Instance constructor arguments."""
    data, name = _read_data(wfile)
    grf = _graph_from_data(data, name)

    try:
        true_params = {}
        for edge in data["edges"]:
            if "true_shape" in edge:
                u, v = int(edge["u"]), int(edge["v"])
                key = edge_key(u, v)
                true_params[key] = GammaParams(edge["true_shape"], edge["true_scale"])

        tasks = []
        for num, entries in enumerate(data.get("tasks", [])):
            entries = sorted(entries, key=lambda ent: int(ent["agent"]))
            tasks.append(
                Task(
                    num,
                    [int(ent["start"]) for ent in entries],
                    [int(ent["goal"]) for ent in entries],
                )
            )
    except (KeyError, TypeError, ValueError) as err:
        raise InstanceFileError("Malformed instance {}: {}".format(name, err)) from err

    return {
        "graph": grf,
        "true_params": true_params,
        "tasks": tasks,
        "seed": data.get("seed"),
        "delay_mapping": data.get("delay_mapping", "moment"),
    }
