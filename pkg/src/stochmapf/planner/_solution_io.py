# -*- coding: utf-8 -*-
"""Import/export of solution files (JSON).

Layout, keyed by agent::

    {"0": {"origin": 4, "start_time": 0.0,
           "commands": [{"u": 4, "v": 9, "d": 6.08, "start_time": 0.0,
                         "fixed": false}, ...]},
     ...}

Only the first command of a path may be flagged fixed.
"""

import json

from stochmapf.common import SMAPFDialog, _SMAPFFile
from stochmapf.common.exceptions import InstanceFileError
from stochmapf.graph.path import Command, Path

smapf = SMAPFDialog()
logger = smapf.functionlogger(__name__)


def export_json(solution, wfile):
    """Write a solution file."""
    xfile = _SMAPFFile(wfile, mode="w")
    xfile.check_folder(raiseerror=OSError)

    paths = solution.values() if isinstance(solution, dict) else solution
    data = {}
    for path in sorted(paths, key=lambda pth: pth.agent):
        data[str(path.agent)] = {
            "origin": path.origin,
            "start_time": path.start_time,
            "commands": [
                {
                    "u": cmd.u,
                    "v": cmd.v,
                    "d": cmd.d,
                    "start_time": tstart,
                    "fixed": path.fixed and num == 0,
                }
                for num, (cmd, tstart, _) in enumerate(path.timed())
            ],
        }

    with open(xfile.file, "w", encoding="utf-8") as stream:
        json.dump(data, stream, indent=1)
    logger.info("Wrote solution of %s agents to %s", len(data), xfile.name)


def import_json(wfile):
    """Read a solution file, return list of Path sorted by agent."""
    xfile = _SMAPFFile(wfile)
    xfile.check_file(raiseerror=InstanceFileError)

    try:
        with open(xfile.file, "r", encoding="utf-8") as stream:
            data = json.load(stream)
        paths = []
        for agent, entry in data.items():
            rows = entry["commands"]
            if any(row.get("fixed", False) for row in rows[1:]):
                raise ValueError("only the first command can be fixed")
            commands = [Command(row["u"], row["v"], row["d"]) for row in rows]
            paths.append(
                Path(
                    int(agent),
                    commands,
                    start_time=entry.get("start_time", 0.0),
                    origin=entry.get("origin"),
                    fixed=bool(rows and rows[0].get("fixed", False)),
                )
            )
    except (AttributeError, KeyError, TypeError, ValueError) as err:
        raise InstanceFileError(
            "Malformed solution file {}: {}".format(xfile.name, err)
        ) from err

    return sorted(paths, key=lambda pth: pth.agent)
