# -*- coding: utf-8 -*-
"""The edge_models module, with the EdgeModels class (learned delay models).

EdgeModels keeps one posterior per undirected edge. It is the parameter
state of the solver: observations update posteriors and the planner reads the
MAP estimates.
"""

import numpy as np

from stochmapf.common import SMAPFDialog, SMAPFDescription
from stochmapf.common.calc import error_ratio, rmse
from stochmapf.common.exceptions import NoConvergenceError
from stochmapf.common.sys import generic_hash
from stochmapf.graph.graph import edge_key
from stochmapf.delay.delay_model import (
    GammaParams,
    PosteriorState,
    PriorConfig,
    map_estimate,
    observe,
)
from . import _edge_models_io

smapf = SMAPFDialog()
logger = smapf.functionlogger(__name__)


def edge_models_from_file(wfile):
    """Make an EdgeModels instance from a learned-parameter dump (JSON).

    Example::

        >>> models = stochmapf.edge_models_from_file("learned.json")
    """
    return EdgeModels._read_file(wfile)  # pylint: disable=protected-access


class EdgeModels:
    """Class for the per-edge posterior delay models of a map.

    Args:
        edges (iterable): Edge keys (u, v), or a Graph.
        prior (PriorConfig): Common prior, default (1.0, 0.2, 0.1, 0.1).
        literal (bool): Use the literal prior_to_pq sign convention.

    .. seealso:: :func:`~stochmapf.delay.delay_model.map_estimate`
    """

    def __init__(self, edges, prior=None, literal=False):
        if hasattr(edges, "edges"):
            edges = [(edge.u, edge.v) for edge in edges.edges]

        self._prior = prior if prior is not None else PriorConfig.default()
        self._literal = literal
        self._priors = {}
        self._states = {}
        self._seen = {}
        self._cache = {}
        self._frozen = False

        for u, v in edges:
            key = edge_key(u, v)
            self._priors[key] = self._prior
            self._states[key] = PosteriorState.from_prior(self._prior, literal=literal)
            self._seen[key] = 0

    @classmethod
    def from_truth(cls, true_params, prior=None):
        """Models fixed at the true parameters, ignoring further observations.

        Each edge gets a prior with mode at its true (shape, scale) and the
        common weights r, s; the posteriors are then frozen.

        Args:
            true_params (dict): GammaParams keyed by (u, v).
            prior (PriorConfig): Supplies r and s.
        """
        prior = prior if prior is not None else PriorConfig.default()
        new = cls(list(true_params.keys()), prior=prior)
        for key, params in true_params.items():
            key = edge_key(*key)
            eprior = PriorConfig(params.shape, params.scale, prior.r, prior.s)
            new._priors[key] = eprior
            new._states[key] = PosteriorState.from_prior(eprior)
            new._cache[key] = GammaParams(params.shape, params.scale)
        new._frozen = True
        return new

    def __repr__(self):
        return "{}(nedges={}, nobs={}, frozen={})".format(
            self.__class__.__name__, self.nedges, self.total_observations, self._frozen
        )

    # ==================================================================================
    # Properties
    # ==================================================================================

    @property
    def prior(self):
        """The common prior (read only)."""
        return self._prior

    @property
    def frozen(self):
        """True if observations do not update the posteriors."""
        return self._frozen

    @property
    def keys(self):
        """Sorted list of edge keys (read only)."""
        return sorted(self._states)

    @property
    def nedges(self):
        return len(self._states)

    @property
    def total_observations(self):
        """Number of observations received, also when frozen."""
        return sum(self._seen.values())

    # ==================================================================================
    # Per edge access
    # ==================================================================================

    def state(self, u, v):
        return self._states[edge_key(u, v)]

    def edge_prior(self, u, v):
        return self._priors[edge_key(u, v)]

    def observations(self, u, v):
        """Number of observations received for the edge."""
        return self._seen[edge_key(u, v)]

    def observe(self, u, v, delay):
        """Update the edge posterior with one observed delay."""
        key = edge_key(u, v)
        self._seen[key] += 1
        if self._frozen:
            return
        self._states[key] = observe(self._states[key], delay)
        self._cache.pop(key, None)

    def map_params(self, u, v):
        """MAP GammaParams of the edge (cached until the next observation)."""
        key = edge_key(u, v)
        if key not in self._cache:
            eprior = self._priors[key]
            try:
                self._cache[key] = map_estimate(
                    self._states[key], a_init=eprior.a_prior
                )
            except NoConvergenceError:
                # no stationary point, e.g. the literal prior without observations
                logger.warning("No MAP estimate for edge %s, use prior mode", key)
                self._cache[key] = eprior.as_params()
        return self._cache[key]

    def all_map_params(self):
        """Return dict of MAP GammaParams keyed by edge key."""
        return {key: self.map_params(*key) for key in self.keys}

    # ==================================================================================
    # Errors against truth
    # ==================================================================================

    def errors(self, true_params, prior=None):
        """Return RMSE and per edge error ratios against the true parameters.

        Args:
            true_params (dict): GammaParams keyed by (u, v).
            prior (PriorConfig): Reference of the error ratios, default is
                the common prior.

        Returns:
            dict with keys rmse_a, rmse_b and per edge lists keys, e_a, e_b,
            n_obs (NaN ratios mark excluded edges).
        """
        prior = prior if prior is not None else self._prior
        keys = self.keys
        est = [self.map_params(*key) for key in keys]
        tru = [true_params[key] for key in keys]
        e_a = [
            error_ratio(t.shape, e.shape, prior.a_prior) for t, e in zip(tru, est)
        ]
        e_b = [
            error_ratio(t.scale, e.scale, prior.b_prior) for t, e in zip(tru, est)
        ]
        return {
            "rmse_a": rmse([e.shape for e in est], [t.shape for t in tru]),
            "rmse_b": rmse([e.scale for e in est], [t.scale for t in tru]),
            "keys": keys,
            "e_a": np.array(e_a, dtype=np.float64),
            "e_b": np.array(e_b, dtype=np.float64),
            "n_obs": np.array([self._seen[key] for key in keys], dtype=np.int64),
        }

    # ==================================================================================
    # Copy, describe and I/O
    # ==================================================================================

    def copy(self):
        """Copy an EdgeModels instance to a new unique instance."""
        new = EdgeModels([], prior=self._prior, literal=self._literal)
        new._priors = dict(self._priors)
        new._states = dict(self._states)
        new._seen = dict(self._seen)
        new._cache = dict(self._cache)
        new._frozen = self._frozen
        return new

    def dump(self):
        """Return list of dicts {u, v, a_map, b_map, n_obs, log_p, q, r, s}."""
        rows = []
        for key in self.keys:
            params = self.map_params(*key)
            state = self._states[key]
            rows.append(
                {
                    "u": key[0],
                    "v": key[1],
                    "a_map": params.shape,
                    "b_map": params.scale,
                    "n_obs": state.n_obs,
                    "log_p": state.log_p,
                    "q": state.q,
                    "r": state.r,
                    "s": state.s,
                    "n_seen": self._seen[key],
                }
            )
        return rows

    def generate_hash(self, hashmethod="md5"):
        """Return a unique hash ID for the current posterior statistics."""
        gid = ";".join(
            "{}-{}:{!r}:{!r}:{!r}:{!r}".format(*key, *self._states[key][0:4])
            for key in self.keys
        )
        return generic_hash(gid, hashmethod=hashmethod)

    def describe(self, flush=True):
        """Describe an instance by printing to stdout."""
        dsc = SMAPFDescription()
        dsc.title("Description of {} instance".format(self.__class__.__name__))
        dsc.txt("Object ID", id(self))
        dsc.txt("Number of edges", self.nedges)
        dsc.txt("Prior (a, b, r, s)", *self._prior)
        dsc.txt("Frozen at truth", self._frozen)
        dsc.txt("Total observations", self.total_observations)
        if self.nedges:
            nobs = [self._seen[key] for key in self.keys]
            dsc.txt("Observations min, max", min(nobs), max(nobs))

        if flush:
            dsc.flush()
            return None

        return dsc.astext()

    def to_file(self, wfile):
        """Export the learned parameters to a JSON dump."""
        _edge_models_io.export_json(self, wfile)

    @classmethod
    def _read_file(cls, wfile):
        prior, frozen, literal, rows = _edge_models_io.import_json(wfile)
        new = cls([(row["u"], row["v"]) for row in rows], prior=prior, literal=literal)
        for row in rows:
            key = edge_key(row["u"], row["v"])
            new._states[key] = PosteriorState(
                row["log_p"], row["q"], row["r"], row["s"], row["n_obs"]
            )
            new._seen[key] = int(row.get("n_seen", row["n_obs"]))
            if frozen:
                new._priors[key] = PriorConfig(
                    row["a_map"], row["b_map"], prior.r, prior.s
                )
        new._frozen = frozen
        return new
