# -*- coding: utf-8 -*-
# flake8: noqa
# pylint: skip-file
# type: ignore

"""The stochmapf Python library: online MAPF with learned stochastic delays."""


import os
import timeit


try:
    from ._theversion import version

    __version__ = version
except ImportError:
    __version__ = "0.0.0"


def _timer(*args):
    time1 = timeit.default_timer()

    if args:
        return time1 - args[0]

    return time1


TIME0 = _timer()

DEBUG = 19

if os.environ.get("SMAPF_DEBUG_DEV") is None:
    DEBUG = 0


def _xprint(msg):

    difftime = _timer(TIME0)

    if DEBUG:
        print("({0:4.3f})  {1}".format(difftime, msg))


_xprint("STOCHMAPF __init__ ...")

#
# Order matters!
#
from stochmapf.common.exceptions import DisconnectedGraphError
from stochmapf.common.exceptions import InvalidEdgeError
from stochmapf.common.exceptions import GenerationFailedError
from stochmapf.common.exceptions import NonPositiveObservationError
from stochmapf.common.exceptions import NoConvergenceError
from stochmapf.common.exceptions import DigammaDomainError
from stochmapf.common.exceptions import NoPathError
from stochmapf.common.exceptions import NoSolutionError
from stochmapf.common.exceptions import FixedCommandConstraintError
from stochmapf.common.exceptions import InvalidPlanError
from stochmapf.common.exceptions import InconsistentFixedCommandError
from stochmapf.common.exceptions import InstanceFileError
from stochmapf.common.exceptions import SimulationStalledError

from stochmapf.common.smapf_dialog import SMAPFDialog
from stochmapf.common.sys import _SMAPFFile

_xprint("Import common... done")

from stochmapf.graph.graph import Graph, build_graph
from stochmapf.graph.path import Command, Path, Task
from stochmapf.graph.instance import Instance

_xprint("Import graph... done")

from stochmapf.delay.delay_model import GammaParams, PriorConfig, PosteriorState
from stochmapf.delay.edge_models import EdgeModels

_xprint("Import delay... done")

from stochmapf.conflict.conflict_estimator import ConflictEstimator

from stochmapf.planner.planner import FixedCommand, OnlineInstance, PlannerConfig
from stochmapf.planner.planner import high_level_search, low_level_search

from stochmapf.simulator.simulator import SimConfig, SimEvent, Simulator

_xprint("Import planner and simulator... done")

from stochmapf.experiment.solver import Solver
from stochmapf.experiment.experiment import ExperimentConfig, SuiteResult
from stochmapf.experiment.experiment import run_suite, run_task

from stochmapf.metadata.metadata import MetaDataRun

# some function wrappers to initiate objects from imports
from stochmapf.graph.instance import generate_instance
from stochmapf.graph.instance import instance_from_file
from stochmapf.graph.instance import graph_from_file
from stochmapf.delay.edge_models import edge_models_from_file
from stochmapf.planner.planner import solution_from_file
from stochmapf.simulator import trace_from_file
from stochmapf.experiment import results_from_file, aggregate_from_file

_xprint("STOCHMAPF __init__ done")
