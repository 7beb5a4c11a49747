# -*- coding: utf-8 -*-
"""Import/export of learned edge parameters (JSON dump)."""

import json

from stochmapf.common import SMAPFDialog, _SMAPFFile
from stochmapf.common.exceptions import InstanceFileError
from stochmapf.delay.delay_model import PriorConfig

smapf = SMAPFDialog()
logger = smapf.functionlogger(__name__)


def export_json(models, wfile):
    """Write a learned-parameter dump."""
    xfile = _SMAPFFile(wfile, mode="w", obj=models)
    xfile.check_folder(raiseerror=OSError)

    data = {
        "prior": list(models.prior),
        "frozen": models.frozen,
        "literal": models._literal,  # pylint: disable=protected-access
        "edges": models.dump(),
    }
    with open(xfile.file, "w", encoding="utf-8") as stream:
        json.dump(data, stream, indent=1)
    logger.info("Wrote %s edge models to %s", models.nedges, xfile.name)


def import_json(wfile):
    """Read a learned-parameter dump, return (prior, frozen, literal, rows)."""
    xfile = _SMAPFFile(wfile)
    xfile.check_file(raiseerror=InstanceFileError)
    xfile.require_fformat("json", raiseerror=InstanceFileError)

    try:
        with open(xfile.file, "r", encoding="utf-8") as stream:
            data = json.load(stream)
        prior = PriorConfig(*data["prior"])
        rows = data["edges"]
        for row in rows:
            for key in ("u", "v", "a_map", "b_map", "n_obs", "log_p", "q", "r", "s"):
                if key not in row:
                    raise KeyError(key)
    except (ValueError, KeyError, TypeError) as err:
        raise InstanceFileError(
            "Malformed parameter dump {}: {}".format(xfile.name, err)
        ) from err

    frozen = bool(data.get("frozen", False))
    return prior, frozen, bool(data.get("literal", False)), rows
