# -*- coding: utf-8 -*-
"""File and folder handling shared by the stochmapf readers and writers."""

import hashlib
import pathlib
import uuid

from .smapf_dialog import SMAPFDialog

smapf = SMAPFDialog()
logger = smapf.functionlogger(__name__)


SUPPORTED_FORMATS = {
    "json": ("json",),
    "jsonl": ("jsonl", "ndjson"),
    "csv": ("csv",),
}

VALID_FILE_ALIASES = ("$md5sum", "$random")

_HASHMETHODS = {
    "md5": hashlib.md5,
    "sha256": hashlib.sha256,
    "blake2b": hashlib.blake2b,
}


def check_folder(fname, raiseerror=None):
    """True if the folder that would hold ``fname`` exists."""
    return _SMAPFFile(fname, mode="w").check_folder(raiseerror=raiseerror)


def generic_hash(gid, hashmethod="md5"):
    """Hex digest of a string signature.

    Graphs, instances and edge models hash their canonical text with this,
    so equal inputs give equal tags in run metadata.

    Args:
        gid (str): Signature text.
        hashmethod (str or callable): "md5", "sha256", "blake2b", or a hashlib
            constructor such as ``hashlib.sha224``.

    Raises:
        KeyError: Unknown method name.
    """
    if isinstance(hashmethod, str):
        mhash = _HASHMETHODS[hashmethod]()
    else:
        mhash = hashmethod()
    mhash.update(gid.encode())
    return mhash.hexdigest()


class _SMAPFFile:
    """Path wrapper used by the stochmapf file readers and writers.

    ``mode`` is "r" for input files, which must exist, and "w" for output
    files, where only the parent folder is checked. For output files the
    stem may be an alias: "$md5sum" becomes ``obj.generate_hash()`` and
    "$random" a random hex string.
    """

    def __init__(self, fobj, mode="r", obj=None):
        if isinstance(fobj, _SMAPFFile):
            raise RuntimeError("Reinstancing object, not allowed", self.__class__)
        if not isinstance(fobj, (str, pathlib.Path)):
            raise RuntimeError(
                "Illegal input, cannot continue ({}) {}: {}".format(
                    self.__class__, fobj, type(fobj)
                )
            )

        self._mode = mode
        self._file = pathlib.Path(fobj)
        if obj is not None:
            self.resolve_alias(obj)

    @property
    def file(self):
        """The pathlib.Path (read only)."""
        return self._file

    @property
    def name(self):
        """Absolute path as a string."""
        try:
            return str(self._file.resolve())
        except OSError:
            return str(self._file.absolute())

    def resolve_alias(self, obj):
        """Replace an aliased file stem, keeping the suffix."""
        stem = self._file.stem
        if "$" not in stem:
            return
        if stem not in VALID_FILE_ALIASES:
            raise ValueError(
                "A '$' is present in file name but this is not a valid alias"
            )

        newstem = obj.generate_hash() if stem == "$md5sum" else uuid.uuid4().hex
        self._file = self._file.with_name(newstem + self._file.suffix)
        logger.debug("Alias %s resolved to %s", stem, self._file)

    def exists(self):
        """For input files, whether the path exists; output files always pass."""
        return self._file.exists() if "r" in self._mode else True

    def check_file(self, raiseerror=None, raisetext=None):
        """True if an input file is present; optionally raise ``raiseerror``."""
        if "r" not in self._mode or self._file.is_file():
            return True
        if raiseerror is not None:
            raise raiseerror(
                raisetext
                or "File {} does not exist or cannot be accessed".format(self.name)
            )
        return False

    def check_folder(self, raiseerror=None, raisetext=None):
        """True if the parent folder exists; optionally raise ``raiseerror``."""
        folder = self._file.parent
        if folder.exists():
            return True
        if raiseerror is not None:
            raise raiseerror(
                raisetext
                or "Folder {} does not exist or cannot be accessed".format(folder.name)
            )
        return False

    def splitext(self, lower=False):
        """Return (stem, suffix) with the suffix dot removed."""
        stem, suffix = self._file.stem, self._file.suffix.lstrip(".")
        if lower:
            return stem.lower(), suffix.lower()
        return stem, suffix

    def detect_fformat(self):
        """Format from the suffix, falling back to sniffing the file head.

        Returns:
            One of "json", "jsonl" or "csv".
        """
        _, suffix = self.splitext(lower=True)
        for fmt, aliases in SUPPORTED_FORMATS.items():
            if suffix in aliases:
                return fmt

        if not self.exists():
            raise ValueError("File {} does not exist".format(self.name))

        with open(self._file, "r", encoding="utf-8") as stream:
            head = stream.read(1024).lstrip()

        if head.startswith("{") and "\n{" in head:
            return "jsonl"
        if head[:1] in ("{", "["):
            return "json"
        if "," in head.split("\n", 1)[0]:
            return "csv"
        raise ValueError("Cannot detect file format for {}".format(self.name))

    def require_fformat(self, fformat, raiseerror=ValueError):
        """Raise ``raiseerror`` unless the file is of format ``fformat``."""
        try:
            found = self.detect_fformat()
        except ValueError as err:
            raise raiseerror(str(err)) from err
        if found != fformat:
            raise raiseerror(
                "Expected a {} file, got {}: {}".format(fformat, found, self.name)
            )
