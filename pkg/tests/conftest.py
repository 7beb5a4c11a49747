"""Setup common stuff for pytests."""
import os

import pytest

import stochmapf


def pytest_runtest_setup(item):
    """Called for each test."""

    markers = [value.name for value in item.iter_markers()]

    # pytest.mark.bigtest
    if "bigtest" in markers:
        if "SMAPF_BIGTEST" not in os.environ:
            pytest.skip("Skip big test (no env variable SMAPF_BIGTEST)")


@pytest.fixture(name="line3")
def fixture_line3():
    """Three vertices in a row, 0 - 1 - 2, unit weights."""
    return stochmapf.build_graph([(0, 0), (1, 0), (2, 0)], [(0, 1), (1, 2)])


@pytest.fixture(name="small_instance")
def fixture_small_instance():
    """A seeded 12 vertex instance with 3 tasks of 2 agents."""
    return stochmapf.generate_instance(11, 12, 2, 3)
