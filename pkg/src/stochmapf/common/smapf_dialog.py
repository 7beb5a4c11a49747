# -*- coding: utf-8 -*-
"""
Dialog and logging for stochmapf.

Log output is switched on from the environment::

  export SMAPF_LOGGING_LEVEL=INFO    # DEBUG, INFO, WARNING or CRITICAL (default)
  export SMAPF_LOGGING_FORMAT=2      # 1 plain, 2 with source location, 3 timestamped

Scripts and tests set up a root handler::

  import stochmapf
  smapf = stochmapf.SMAPFDialog()
  logger = smapf.basiclogger(__name__)

while library modules only ask for a named logger::

  smapf = SMAPFDialog()
  logger = smapf.functionlogger(__name__)

The user message templates (say, warn, error, critical) are meant for
client code such as the command line tool, never for the solver internals.
"""

import logging
import os
import platform
import sys
import time
import warnings

_COLOURS = {
    "W": "\033[93;43m",
    "E": "\033[93;41m",
    "C": "\033[1;91m",
}
_RESET = "\033[0m"

VALID_LEVELS = ("INFO", "WARNING", "DEBUG", "CRITICAL")

_FORMATS = {
    1: "%(levelname)8s: (%(relative)ss) \t%(message)s",
    2: "%(levelname)8s (%(relative)ss) %(pathname)44s "
    "[%(funcName)32s()] %(lineno)4d >> \t%(message)s",
    3: "%(asctime)s %(name)36s (delta=%(relative)ss) "
    "[%(funcName)32s()] %(levelname)8s: \t%(message)s",
}


def _package_version():
    try:
        # pylint: disable=import-outside-toplevel
        from stochmapf._theversion import version

        return version
    except ImportError:
        return "0.0.0"


class SMAPFShowProgress:
    """Print percentage progress of a loop, e.g. tasks in a suite.

    Example::

        prog = SMAPFShowProgress(len(tasks), leadtext="Tasks ")
        for i, task in enumerate(tasks):
            run_task(task)
            prog.flush(i)
        prog.finished()
    """

    def __init__(self, maxiter, info="", leadtext="", skip=1, show=True):
        self._max = max(1, maxiter)
        self._info = info
        self._show = show
        self._leadtext = leadtext
        self._skip = skip
        self._next = 0

    def _line(self, percent):
        print("{}{}% {}".format(self._leadtext, percent, self._info).rstrip())

    def flush(self, step):
        if not self._show:
            return
        percent = int(100.0 * step / self._max)
        if percent >= self._next:
            self._line(percent)
            self._next = percent + self._skip

    def finished(self):
        if self._show:
            self._line(100)


class SMAPFDescription:
    """Collect key/value lines for the describe() methods."""

    _RULE = "=" * 79

    def __init__(self):
        self._txt = []

    def title(self, atitle):
        self._txt.extend([self._RULE, str(atitle), self._RULE])

    def txt(self, key, *values):
        if values:
            line = "{:36s} => {}".format(str(key), "  ".join(str(v) for v in values))
        else:
            line = "{:36s}".format(str(key))
        self._txt.append(line)

    def astext(self):
        return "\n".join(self._txt + [self._RULE])

    def flush(self):
        print(self.astext())


class _RelativeTimeFilter(logging.Filter):  # pylint: disable=too-few-public-methods
    """Attach seconds since the previous record as ``record.relative``."""

    def __init__(self):
        super().__init__()
        self._last = None

    def filter(self, record):
        previous = record.relativeCreated if self._last is None else self._last
        record.relative = "{:7.3f}".format((record.relativeCreated - previous) / 1000.0)
        self._last = record.relativeCreated
        return True


class _ShortPathFormatter(logging.Formatter):
    """Strip everything up to ``src/`` from long source paths."""

    def format(self, record):
        path = getattr(record, "pathname", "")
        if len(path) > 40 and "src/" in path:
            record.pathname = path.split("src/", 1)[1]
        return super().format(record)


class SMAPFDialog:
    """Logging setup and user messages for stochmapf."""

    def __init__(self):
        self._rootlogger = logging.getLogger()
        self._logginglevel = "CRITICAL"
        self._lformatlevel = 1
        self._showrtwarnings = True

        self._logginglevel_fromenv = os.environ.get("SMAPF_LOGGING_LEVEL")
        if self._logginglevel_fromenv:
            self.logginglevel = self._logginglevel_fromenv

        fromenv = os.environ.get("SMAPF_LOGGING_FORMAT")
        if fromenv is not None:
            self._lformatlevel = int(fromenv)

    @property
    def bigtest(self):
        """True when the slow statistical tests are requested."""
        return "SMAPF_BIGTEST" in os.environ

    @property
    def logginglevel(self):
        """Logging level as a name, e.g. 'CRITICAL'."""
        return self._logginglevel

    @logginglevel.setter
    def logginglevel(self, level):
        if level not in VALID_LEVELS:
            raise ValueError("Invalid level given, must be in {}".format(VALID_LEVELS))
        self._logginglevel = level

    @property
    def numericallogginglevel(self):
        return getattr(logging, self._logginglevel, logging.CRITICAL)

    @property
    def loggingformatlevel(self):
        return self._lformatlevel

    @property
    def loggingformat(self):
        """Install the format on the root handlers and return the format string."""
        fmtstring = _FORMATS[min(max(self._lformatlevel, 1), 3)]
        if self._lformatlevel == 2:
            formatter = _ShortPathFormatter(fmt=fmtstring)
        else:
            formatter = logging.Formatter(fmt=fmtstring)

        for handler in self._rootlogger.handlers:
            if not any(isinstance(f, _RelativeTimeFilter) for f in handler.filters):
                handler.addFilter(_RelativeTimeFilter())
            handler.setFormatter(formatter)
        return fmtstring

    @staticmethod
    def get_smapf_info():
        """One line with package version and platform."""
        return "stochmapf version {} (Python {} on {})".format(
            _package_version(), platform.python_version(), platform.system()
        )

    def basiclogger(self, name, logginglevel=None, loggingformat=None, info=False):
        """Configure the root logger and return the logger called ``name``.

        A level from SMAPF_LOGGING_LEVEL takes precedence over ``logginglevel``.
        """
        if logginglevel is not None and self._logginglevel_fromenv is None:
            self.logginglevel = logginglevel
        if isinstance(loggingformat, int):
            self._lformatlevel = loggingformat

        logging.basicConfig(stream=sys.stdout)
        fmtstring = self.loggingformat
        if info:
            print(
                "Logging level {} with format {}: {}".format(
                    self.logginglevel, self._lformatlevel, fmtstring
                )
            )
        self._rootlogger.setLevel(self.numericallogginglevel)
        logging.captureWarnings(True)
        return logging.getLogger(name)

    @staticmethod
    def functionlogger(name):
        """Logger for library code; silent unless the application configures one."""
        logger = logging.getLogger(name)
        logger.addHandler(logging.NullHandler())
        return logger

    @staticmethod
    def timer(*args):
        """Return a clock reading, or the seconds elapsed since a given reading."""
        now = time.perf_counter()
        return now - args[0] if args else now

    def show_runtimewarnings(self, flag=True):
        self._showrtwarnings = flag

    def say(self, string):
        self._output("M", string)

    def warn(self, string):
        if self._showrtwarnings:
            self._output("W", string)

    warning = warn

    def error(self, string):
        self._output("E", string)

    def critical(self, string, sysexit=True):
        self._output("C", string)
        if sysexit:
            raise SystemExit("STOP!")

    @staticmethod
    def warndeprecated(string):
        warnings.simplefilter("default", DeprecationWarning)
        warnings.warn(string, DeprecationWarning, stacklevel=2)

    @staticmethod
    def warnuser(string):
        warnings.simplefilter("default", UserWarning)
        warnings.warn(string, UserWarning, stacklevel=2)

    @staticmethod
    def _output(ulevel, string):
        caller = sys._getframe(2).f_code.co_name  # pylint: disable=protected-access
        colour = _COLOURS.get(ulevel, "")
        print(
            "{}<{}> [{:>24s}] {}{}".format(
                colour, ulevel, caller, string, _RESET if colour else ""
            )
        )
