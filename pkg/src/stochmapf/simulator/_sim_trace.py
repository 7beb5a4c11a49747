# -*- coding: utf-8 -*-
"""Event trace records and their export/import (JSON Lines).

One line per processed event::

    {"time": 5.0, "kind": "arrival_at_vertex", "agent": 1,
     "edge": [0, 2], "vertex": 2, "detail": ""}

"""

import json

from stochmapf.common import SMAPFDialog, _SMAPFFile
from stochmapf.common.exceptions import InstanceFileError

smapf = SMAPFDialog()
logger = smapf.functionlogger(__name__)


def record(event, agt, detail):
    """Return the trace record of a processed event."""
    edge = event.payload
    if edge is not None:
        vertex = edge[1]
        edge = [edge[0], edge[1]]
    else:
        vertex = agt.vertex if agt.vertex is not None else agt.target
    return {
        "time": event.time,
        "kind": event.kind,
        "agent": event.agent,
        "edge": edge,
        "vertex": vertex,
        "detail": detail,
    }


def export_jsonl(trace, wfile):
    """Write trace records, one JSON object per line."""
    xfile = _SMAPFFile(wfile, mode="w")
    xfile.check_folder(raiseerror=OSError)

    with open(xfile.file, "w", encoding="utf-8") as stream:
        for rec in trace:
            stream.write(json.dumps(rec) + "\n")
    logger.info("Wrote %s trace records to %s", len(trace), xfile.name)


def import_jsonl(wfile):
    """Read trace records from a JSON Lines file."""
    xfile = _SMAPFFile(wfile)
    xfile.check_file(raiseerror=InstanceFileError)

    records = []
    with open(xfile.file, "r", encoding="utf-8") as stream:
        for num, line in enumerate(stream, start=1):
            if not line.strip():
                continue
            try:
                records.append(json.loads(line))
            except ValueError as err:
                raise InstanceFileError(
                    "Bad trace line {} in {}: {}".format(num, xfile.name, err)
                ) from err
    return records
