# -*- coding: utf-8 -*-
import pathlib

import pytest

import stochmapf
import stochmapf.common.sys as ssys
from stochmapf.common import _SMAPFFile

smapf = stochmapf.SMAPFDialog()
logger = smapf.basiclogger(__name__)


def test_generic_hash():
    """Testing generic hashlib function."""
    ahash = ssys.generic_hash("ABCDEF")
    assert ahash == "8827a41122a5028b9808c7bf84b9fcf6"

    ahash = ssys.generic_hash("ABCDEF", hashmethod="sha256")
    assert ahash == "e9c0f8b575cbfcb42ab3b78ecc87efa3b011d9a5d10b09fa4e96f240bf6a82f5"

    ahash = ssys.generic_hash("ABCDEF", hashmethod="blake2b")
    assert ahash[0:12] == "0bb3eb1511cb"

    with pytest.raises(KeyError):
        ahash = ssys.generic_hash("ABCDEF", hashmethod="invalid")


def test_smapffile_check(tmp_path):
    """File and folder checks, with and without exceptions."""
    missing = _SMAPFFile(tmp_path / "nosuch.json")
    assert missing.check_file() is False
    with pytest.raises(stochmapf.InstanceFileError):
        missing.check_file(raiseerror=stochmapf.InstanceFileError)

    present = tmp_path / "some.json"
    present.write_text("{}")
    assert _SMAPFFile(present).check_file() is True
    assert _SMAPFFile(str(present)).file == present

    nofolder = _SMAPFFile(tmp_path / "nofolder" / "x.json", mode="w")
    assert nofolder.check_folder() is False
    with pytest.raises(OSError):
        nofolder.check_folder(raiseerror=OSError)
    assert ssys.check_folder(tmp_path / "x.json") is True


def test_smapffile_alias(tmp_path):
    """The $md5sum alias takes the object hash as file stem."""

    class _Hashable:
        @staticmethod
        def generate_hash():
            return "abc123"

    xfile = _SMAPFFile(tmp_path / "$md5sum.json", mode="w", obj=_Hashable())
    assert xfile.file == tmp_path / "abc123.json"

    with pytest.raises(ValueError):
        _SMAPFFile(tmp_path / "$other.json", mode="w", obj=_Hashable())


def test_smapffile_illegal_input():
    with pytest.raises(RuntimeError):
        _SMAPFFile(123)
    with pytest.raises(RuntimeError):
        _SMAPFFile(_SMAPFFile(pathlib.Path("x.json")))


def test_detect_fformat(tmp_path):
    """Format from suffix, else from the first characters."""
    assert _SMAPFFile(tmp_path / "a.json").detect_fformat() == "json"
    assert _SMAPFFile(tmp_path / "a.JSONL").detect_fformat() == "jsonl"
    assert _SMAPFFile(tmp_path / "a.csv").detect_fformat() == "csv"

    noext = tmp_path / "results"
    noext.write_text("task_id,mode\n1,gstt\n")
    assert _SMAPFFile(noext).detect_fformat() == "csv"

    noext.write_text('{"a": 1}\n{"a": 2}\n')
    assert _SMAPFFile(noext).detect_fformat() == "jsonl"

    with pytest.raises(ValueError):
        _SMAPFFile(tmp_path / "nosuch").detect_fformat()


def test_require_fformat(tmp_path):
    wfile = tmp_path / "inst.csv"
    wfile.write_text("a,b\n1,2\n")
    with pytest.raises(stochmapf.InstanceFileError, match="Expected a json"):
        _SMAPFFile(wfile).require_fformat(
            "json", raiseerror=stochmapf.InstanceFileError
        )

    noext = tmp_path / "blank"
    noext.write_text("\n")
    with pytest.raises(OSError):
        _SMAPFFile(noext).require_fformat("json", raiseerror=OSError)
    _SMAPFFile(tmp_path / "inst.json").require_fformat("json")
