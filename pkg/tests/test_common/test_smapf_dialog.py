# -*- coding: utf-8 -*-
import time

import pytest

import stochmapf
from stochmapf.common import SMAPFDescription, SMAPFDialog, SMAPFShowProgress

# pylint: disable=invalid-name

smapf = SMAPFDialog()
logger = smapf.basiclogger(__name__)


def test_info_logger_plain():
    """Test basic logger behaviour, will capture output to stdin"""
    logger.info("This is a test")
    assert smapf.loggingformatlevel >= 1


def test_timer():
    """Test the timer function"""
    time1 = smapf.timer()
    for inum in range(100000):
        inum += 1
    time.sleep(0.01)
    usedtime = smapf.timer(time1)
    assert usedtime > 0.0


def test_logginglevel():
    dialog = SMAPFDialog()
    dialog.logginglevel = "INFO"
    assert dialog.logginglevel == "INFO"
    assert dialog.numericallogginglevel == 20
    with pytest.raises(ValueError):
        dialog.logginglevel = "LOUD"


def test_user_messages(capsys):
    """The say/warn/error templates print to stdout."""
    smapf.say("Hello")
    smapf.warn("Careful")
    smapf.error("Oops")
    out = capsys.readouterr().out
    assert "Hello" in out
    assert "Careful" in out
    assert "Oops" in out

    with pytest.raises(SystemExit):
        smapf.critical("Stop here")

    with pytest.warns(UserWarning):
        smapf.warnuser("A user warning")


def test_description():
    dsc = SMAPFDescription()
    dsc.title("A title")
    dsc.txt("Key", 1, 2)
    text = dsc.astext()
    assert "A title" in text
    assert "=> 1  2" in text


def test_show_progress(capsys):
    prog = SMAPFShowProgress(4, leadtext="Tasks ")
    for step in range(4):
        prog.flush(step)
    prog.finished()
    assert "Tasks 0%" in capsys.readouterr().out


def test_version_and_info():
    assert isinstance(stochmapf.__version__, str)
    assert "stochmapf version" in SMAPFDialog.get_smapf_info()


def test_runtime_warnings_switch(capsys):
    dialog = SMAPFDialog()
    dialog.show_runtimewarnings(False)
    dialog.warn("Hidden")
    assert "Hidden" not in capsys.readouterr().out

    dialog.show_runtimewarnings(True)
    dialog.warning("Shown")
    assert "Shown" in capsys.readouterr().out

    with pytest.warns(DeprecationWarning):
        dialog.warndeprecated("Old keyword")


def test_bigtest_flag(monkeypatch):
    monkeypatch.delenv("SMAPF_BIGTEST", raising=False)
    assert not SMAPFDialog().bigtest
    monkeypatch.setenv("SMAPF_BIGTEST", "1")
    assert SMAPFDialog().bigtest


def test_logging_format_levels():
    dialog = SMAPFDialog()
    dialog.basiclogger("stochmapf.test", loggingformat=2)
    assert "funcName" in dialog.loggingformat
    dialog.basiclogger("stochmapf.test", loggingformat=1)
    assert "funcName" not in dialog.loggingformat
