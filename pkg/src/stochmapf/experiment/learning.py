# -*- coding: utf-8 -*-
"""Learning curves: RMSE of the MAP estimates and per edge error ratios.

The error ratio of an edge compares the MAP estimate with the prior::

    E_a = |a - a_map| / |a - a_prior|,    E_b = |b - b_map| / |b - b_prior|

1.0 means no improvement over the prior and 0.0 a perfect estimate. Edges
where the truth equals the prior get NaN (excluded) unless the estimate is
exact too.
"""

from collections import OrderedDict, namedtuple

import numpy as np
import pandas as pd

from stochmapf.common import SMAPFDialog
from stochmapf.common.calc import running_mean
from stochmapf.common.constants import MILESTONES

smapf = SMAPFDialog()
logger = smapf.functionlogger(__name__)


class LearningEntry(
    namedtuple("LearningEntry", "rmse_a rmse_b keys e_a e_b n_obs")
):
    """RMSE over all edges and per edge error ratios at one moment."""

    __slots__ = ()

    def frame(self, graph=None):
        """Per edge table u, v, e_a, e_b, n_obs, with midpoints if graph given."""
        dfr = pd.DataFrame(
            {
                "u": [key[0] for key in self.keys],
                "v": [key[1] for key in self.keys],
                "e_a": self.e_a,
                "e_b": self.e_b,
                "n_obs": self.n_obs,
            }
        )
        if graph is not None:
            uxy = np.array([graph.coordinates(key[0]) for key in self.keys])
            vxy = np.array([graph.coordinates(key[1]) for key in self.keys])
            mid = 0.5 * (uxy + vxy) if len(self.keys) else np.empty((0, 2))
            dfr["x_mid"] = mid[:, 0]
            dfr["y_mid"] = mid[:, 1]
        return dfr

    def to_dict(self):
        return {
            "rmse_a": _none(self.rmse_a),
            "rmse_b": _none(self.rmse_b),
            "keys": [list(key) for key in self.keys],
            "e_a": [None if np.isnan(val) else float(val) for val in self.e_a],
            "e_b": [None if np.isnan(val) else float(val) for val in self.e_b],
            "n_obs": [int(val) for val in self.n_obs],
        }

    @classmethod
    def from_dict(cls, data):
        return cls(
            _float(data["rmse_a"]),
            _float(data["rmse_b"]),
            [tuple(key) for key in data["keys"]],
            np.array([np.nan if val is None else val for val in data["e_a"]]),
            np.array([np.nan if val is None else val for val in data["e_b"]]),
            np.array(data["n_obs"], dtype=np.int64),
        )


def rmse_report(solver_state, true_params, prior=None, traversals=None):
    """Return the LearningEntry of the current models.

    Args:
        solver_state: EdgeModels, or a Solver (its models and traversals).
        true_params (dict): True GammaParams keyed by edge key.
        prior (PriorConfig): Reference of the error ratios, default is the
            models' common prior.
        traversals (dict): Observation count per edge key; default is the
            count held by the models.
    """
    models = getattr(solver_state, "models", solver_state)
    if traversals is None and hasattr(solver_state, "traversals"):
        traversals = solver_state.traversals

    err = models.errors(true_params, prior=prior)
    n_obs = err["n_obs"]
    if traversals is not None:
        n_obs = np.array(
            [traversals.get(key, 0) for key in err["keys"]], dtype=np.int64
        )
    return LearningEntry(
        err["rmse_a"], err["rmse_b"], err["keys"], err["e_a"], err["e_b"], n_obs
    )


class LearningReport:
    """Per task learning curves of a suite, with per edge milestone snapshots.

    Args:
        milestones (tuple): Task counts after which the per edge ratios and
            observation counts are kept.
    """

    def __init__(self, milestones=MILESTONES):
        self._milestones = tuple(milestones)
        self._rmse_a = []
        self._rmse_b = []
        self._conflicts = []
        self._flowtimes = []
        self._snapshots = OrderedDict()
        self._last = None

    def __repr__(self):
        return "{}(ntasks={}, snapshots={})".format(
            self.__class__.__name__, self.ntasks, list(self._snapshots)
        )

    @property
    def ntasks(self):
        return len(self._rmse_a)

    @property
    def rmse_a(self):
        return np.array(self._rmse_a, dtype=np.float64)

    @property
    def rmse_b(self):
        return np.array(self._rmse_b, dtype=np.float64)

    @property
    def snapshots(self):
        """OrderedDict of LearningEntry keyed by task count."""
        return self._snapshots

    def add(self, entry, vertex_conflicts, flowtime):
        """Append the state after one more task."""
        self._rmse_a.append(entry.rmse_a)
        self._rmse_b.append(entry.rmse_b)
        self._conflicts.append(vertex_conflicts)
        self._flowtimes.append(flowtime)
        self._last = entry
        if self.ntasks in self._milestones:
            self._snapshots[self.ntasks] = entry

    def finalize(self):
        """Keep a snapshot of the final task too."""
        if self._last is not None and self.ntasks not in self._snapshots:
            self._snapshots[self.ntasks] = self._last

    def running_means(self):
        """Return (conflicts, flowtime) cumulative averages per task."""
        return running_mean(self._conflicts), running_mean(self._flowtimes)

    def curves(self):
        """Per task table: task, rmse_a, rmse_b and the running means."""
        conf, flow = self.running_means()
        return pd.DataFrame(
            {
                "task": np.arange(1, self.ntasks + 1),
                "rmse_a": self.rmse_a,
                "rmse_b": self.rmse_b,
                "mean_vertex_conflicts": conf,
                "mean_flowtime": flow,
            }
        )

    def to_dict(self):
        conf, flow = self.running_means()
        return {
            "rmse_a": [_none(val) for val in self._rmse_a],
            "rmse_b": [_none(val) for val in self._rmse_b],
            "running_mean_conflicts": conf.tolist(),
            "running_mean_flowtime": flow.tolist(),
            "vertex_conflicts": list(self._conflicts),
            "flowtime": list(self._flowtimes),
            "snapshots": {
                str(key): entry.to_dict() for key, entry in self._snapshots.items()
            },
        }

    @classmethod
    def from_dict(cls, data):
        new = cls(milestones=())
        new._rmse_a = [_float(val) for val in data["rmse_a"]]
        new._rmse_b = [_float(val) for val in data["rmse_b"]]
        new._conflicts = list(data.get("vertex_conflicts", [0] * len(new._rmse_a)))
        new._flowtimes = list(data.get("flowtime", [0.0] * len(new._rmse_a)))
        for key, entry in data.get("snapshots", {}).items():
            new._snapshots[int(key)] = LearningEntry.from_dict(entry)
        return new


def milestones(ntasks, marks=MILESTONES):
    """Milestones reached in a suite of ntasks tasks, plus the final task."""
    reached = [mark for mark in marks if mark <= ntasks]
    if ntasks and ntasks not in reached:
        reached.append(ntasks)
    return reached


def _float(val):
    return np.nan if val is None else float(val)


def _none(val):
    return None if np.isnan(val) else float(val)
