"""Some common stochmapf calculation routines."""

import math

import numpy as np

from stochmapf.common.smapf_dialog import SMAPFDialog

smapf = SMAPFDialog()

logger = smapf.functionlogger(__name__)


def vectorlength2(x1, y1, x2, y2):
    """Return the Euclidean length between two points in the plane."""
    return math.hypot(x2 - x1, y2 - y1)


def derive_seed(master, *keys):
    """Derive a component seed from a master seed and integer keys.

    The derivation goes through ``numpy.random.SeedSequence`` with the keys as
    spawn key, so the same (master, keys) always gives the same seed while
    distinct keys give statistically independent streams.

    Args:
        master (int): The master seed, e.g. from the --seed flag.
        keys (int): Component keys, e.g. ``(1, task_index)``.

    Returns:
        A non-negative int below 2**63.

    Example::

        simseed = derive_seed(7, 1, 12)  # simulation of task 12
    """
    if master is None or int(master) < 0:
        raise ValueError("Master seed must be a non-negative integer")
    seq = np.random.SeedSequence(int(master), spawn_key=tuple(int(k) for k in keys))
    state = seq.generate_state(2, dtype=np.uint32)
    return int((int(state[0]) << 31) ^ int(state[1])) & ((1 << 63) - 1)


def rmse(estimated, truth):
    """Root mean square error between two equally sized sequences.

    Returns 0.0 for empty input.
    """
    est = np.asarray(estimated, dtype=np.float64)
    tru = np.asarray(truth, dtype=np.float64)
    if est.shape != tru.shape:
        raise ValueError("Shape mismatch {} vs {}".format(est.shape, tru.shape))
    if est.size == 0:
        return 0.0
    return float(np.sqrt(np.mean((est - tru) ** 2)))


def error_ratio(truth, estimate, prior):
    """Return |truth - estimate| / |truth - prior|.

    If the denominator is zero the ratio is 0.0 when the numerator is also
    zero, otherwise NaN (the edge is then excluded from ratio plots).
    """
    numer = abs(truth - estimate)
    denom = abs(truth - prior)
    if denom == 0.0:
        if numer == 0.0:
            return 0.0
        logger.debug("Error ratio excluded, truth equals prior")
        return float("nan")
    return numer / denom


def running_mean(values):
    """Cumulative average of a sequence, as a numpy array."""
    vals = np.asarray(values, dtype=np.float64)
    if vals.size == 0:
        return vals
    return np.cumsum(vals) / np.arange(1, vals.size + 1)
