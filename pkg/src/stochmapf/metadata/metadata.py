# -*- coding: utf-8 -*-
"""Run metadata, echoed into the aggregate output of suites and sweeps.

The required part is enough to reproduce a run: package version, seed and
every configuration flag. The optional part records where the instance came
from, including the md5 of its content::

    >>> meta = MetaDataRun()
    >>> meta.required = config
    >>> meta.opt.md5sum = instance.generate_hash()
    >>> meta.get_metadata()

"""
import datetime
import getpass
from collections import OrderedDict

from stochmapf.common import SMAPFDialog
from stochmapf.common.smapf_dialog import _package_version

smapf = SMAPFDialog()
logger = smapf.functionlogger(__name__)


def _current_user():
    try:
        return getpass.getuser()
    except (KeyError, OSError):
        return "anonymous"


class _OptionalMetaData:
    """Optional run metadata; only the keys in __slots__ are accepted."""

    __slots__ = (
        "_name",
        "_datatype",
        "_md5sum",
        "_description",
        "_datetime",
        "_user",
        "_source",
    )

    def __init__(self, datatype=None):
        self._name = "unnamed run"
        self._datatype = datatype
        self._md5sum = None
        self._description = ""
        self._datetime = datetime.datetime.now().isoformat(timespec="seconds")
        self._user = _current_user()
        self._source = "unknown"

    name = property(lambda self: self._name)

    @name.setter
    def name(self, newname):
        self._name = str(newname)

    datetime = property(lambda self: self._datetime)

    description = property(lambda self: self._description)

    @description.setter
    def description(self, newstr):
        if not isinstance(newstr, str) or len(newstr) >= 64:
            raise ValueError("The description must be a string below 64 letters.")
        self._description = newstr

    md5sum = property(lambda self: self._md5sum, doc="Hash of the instance content.")

    @md5sum.setter
    def md5sum(self, newhash):
        if newhash is not None and not isinstance(newhash, str):
            raise ValueError("The md5sum must be a string.")
        self._md5sum = newhash

    source = property(lambda self: self._source, doc="Instance file or 'generated'.")

    @source.setter
    def source(self, newsource):
        self._source = str(newsource)

    def update(self, indict):
        if not isinstance(indict, dict):
            raise ValueError(f"Input must be a dictionary, not a {type(indict)}")
        for key, value in indict.items():
            if "_" + key not in self.__slots__:
                raise ValueError(f"Invalid optional metadata key: {key}")
            setattr(self, "_" + key, value)

    def get_meta(self):
        return OrderedDict((key[1:], getattr(self, key)) for key in self.__slots__)


class MetaDataRun:
    """Metadata for one experiment run (a suite or a sweep)."""

    REQUIRED = OrderedDict(
        [
            ("version", "0.0.0"),
            ("seed", None),
            ("mode", "gstt"),
            ("use_or", True),
            ("use_pu", True),
            ("no_error", False),
            ("epsilon", 0.01),
            ("t_ci", 100.0),
            ("c_penalty", 1.0),
            ("t_limit", 10.0),
            ("prior", [1.0, 0.2, 0.1, 0.1]),
            ("n_samples", 1000),
            ("zero_delay", False),
        ]
    )

    def __init__(self):
        self._required = OrderedDict(self.REQUIRED)
        self._required["version"] = _package_version()
        self._optional = _OptionalMetaData(datatype="Experiment run")
        self._freeform = OrderedDict()

    @property
    def required(self):
        """Get, or set from an ExperimentConfig, the run settings."""
        return self._required

    @required.setter
    def required(self, config):
        keys = [key for key in self._required if key != "version"]
        missing = [key for key in keys if not hasattr(config, key)]
        if missing:
            raise ValueError("Input object lacks run settings {}".format(missing))
        for key in keys:
            value = getattr(config, key)
            self._required[key] = list(value) if key == "prior" else value

    @property
    def optional(self):
        """Optional metadata as a dict copy; assign a dict to update keys."""
        return self._optional.get_meta()

    @optional.setter
    def optional(self, indict):
        self._optional.update(indict)

    @property
    def opt(self):
        """The optional metadata object itself, for attribute access."""
        return self._optional

    @property
    def freeform(self):
        return self._freeform

    @freeform.setter
    def freeform(self, adict):
        self._freeform = OrderedDict(adict)

    def get_metadata(self):
        """All metadata as one nested dictionary."""
        return OrderedDict(
            [
                ("_required_", self._required),
                ("_optional_", self._optional.get_meta()),
                ("_freeform_", self._freeform),
            ]
        )
