# -*- coding: utf-8 -*-
"""The solver module: the planner together with its learned delay models.

The Solver is the state carried from task to task in a suite: the posterior
per edge (an :class:`~stochmapf.delay.EdgeModels`) and a count of traversals
per edge.
"""

from collections import Counter
from dataclasses import replace

from stochmapf.common import SMAPFDialog
from stochmapf.graph.graph import edge_key
from stochmapf.planner.planner import PlannerConfig, high_level_search

smapf = SMAPFDialog()
logger = smapf.functionlogger(__name__)


class Solver:
    """Plan with the MAP delay models, learn from observed delays.

    Args:
        graph (Graph): The map.
        models (EdgeModels): Learned delay models, updated in place.
        config (PlannerConfig): Planner settings.
        learn (bool): Update the posteriors with observations.
    """

    def __init__(self, graph, models, config=None, learn=True):
        self._graph = graph
        self._models = models
        self._config = config if config is not None else PlannerConfig()
        self._learn = learn
        self._traversals = Counter()
        self._ncalls = 0

    def __repr__(self):
        return "{}(mode={}, learn={}, calls={})".format(
            self.__class__.__name__, self._config.mode, self._learn, self._ncalls
        )

    @property
    def models(self):
        """The EdgeModels (read only)."""
        return self._models

    @property
    def config(self):
        return self._config

    @property
    def learn(self):
        return self._learn

    @property
    def traversals(self):
        """Counter of observed traversals per edge key, also when not learning."""
        return self._traversals

    def find_solution(self, instance, seed=None):
        """Run the high level search on an OnlineInstance.

        Args:
            instance (OnlineInstance): The problem.
            seed (int): Monte-Carlo seed of this call, default from config.

        Returns:
            SearchResult
        """
        config = self._config if seed is None else replace(self._config, seed=seed)
        self._ncalls += 1
        result = high_level_search(instance, config, self._models)
        logger.info(
            "Solver call %s: %s, cost %.3f, %s nodes, %.3f s",
            self._ncalls,
            result.status,
            result.cost,
            result.nodes_generated,
            result.calc_time,
        )
        return result

    def update_parameter(self, observation):
        """Record a DelayObservation and update the edge posterior."""
        u, v = observation.edge
        self._traversals[edge_key(u, v)] += 1
        if self._learn:
            self._models.observe(u, v, observation.delay)
