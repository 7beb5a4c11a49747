# -*- coding: utf-8 -*-

import math

import numpy as np
import pytest

import stochmapf
import stochmapf.common.calc as scalc

smapf = stochmapf.SMAPFDialog()
logger = smapf.basiclogger(__name__)

# =============================================================================
# Do tests of simple calc routines
# =============================================================================


def test_vectorlength2():
    """Euclidean length in the plane."""
    assert scalc.vectorlength2(0, 0, 3, 4) == pytest.approx(5.0)
    assert scalc.vectorlength2(1, 1, 1, 1) == 0.0


def test_derive_seed_is_deterministic():
    """Same master and keys give the same seed, other keys another seed."""
    seed1 = scalc.derive_seed(7, 1, 12)
    assert seed1 == scalc.derive_seed(7, 1, 12)
    assert seed1 != scalc.derive_seed(7, 1, 13)
    assert seed1 != scalc.derive_seed(7, 2, 12)
    assert seed1 != scalc.derive_seed(8, 1, 12)
    assert 0 <= seed1 < 2 ** 63


def test_derive_seed_invalid_master():
    with pytest.raises(ValueError):
        scalc.derive_seed(-1, 1)
    with pytest.raises(ValueError):
        scalc.derive_seed(None, 1)


def test_rmse():
    assert scalc.rmse([1.0, 2.0], [1.0, 2.0]) == 0.0
    assert scalc.rmse([0.0, 0.0], [3.0, 4.0]) == pytest.approx(math.sqrt(12.5))
    assert scalc.rmse([], []) == 0.0
    with pytest.raises(ValueError):
        scalc.rmse([1.0], [1.0, 2.0])


def test_error_ratio():
    """Ratio against the prior, zero denominator handled."""
    assert scalc.error_ratio(2.0, 1.5, 1.0) == pytest.approx(0.5)
    assert scalc.error_ratio(2.0, 2.0, 1.0) == 0.0
    assert scalc.error_ratio(2.0, 2.0, 2.0) == 0.0
    assert np.isnan(scalc.error_ratio(2.0, 1.0, 2.0))


def test_running_mean():
    vals = scalc.running_mean([2, 4, 6])
    assert vals.tolist() == pytest.approx([2.0, 3.0, 4.0])
    assert scalc.running_mean([]).size == 0
