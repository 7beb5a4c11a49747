# -*- coding: utf-8 -*-
"""The planner module: constraint tree search in CBS, STT and GSTT modes.

The high level keeps a priority queue of constraint tree nodes. A node holds
a constraint set and one path per agent; conflicts of the node are estimated
when it is created. The modes differ in how conflicts are found and in the
queue order:

* ``cbs``: conflicts on the planned (zero delay) timing, queue by cost;
* ``stt``: Monte-Carlo conflicts with the learned delay models above the
  threshold epsilon, queue by cost;
* ``gstt``: as stt, but queue by the maximum command pair conflict
  probability first, then cost.

A search that runs past the time limit returns the node on top of the queue,
even if it still has a conflict.

Example::

    >>> inst = OnlineInstance.from_task(graph, task, calc_time_limit=10.0)
    >>> result = high_level_search(inst, PlannerConfig(mode="gstt"), models)
    >>> result.status
    'conflict_free'

"""

import heapq
import itertools
import logging
import math
from collections import namedtuple
from dataclasses import dataclass

from stochmapf.common import SMAPFDialog
from stochmapf.common.constants import (
    EPSILON,
    HORIZON_FACTOR,
    MIN_CONSTRAINT_WIDTH,
    N_SAMPLES,
    PLANNER_MODES,
    T_LIMIT,
    TIME_EPS,
)
from stochmapf.common.exceptions import (
    FixedCommandConstraintError,
    NoPathError,
    NoSolutionError,
)
from stochmapf.conflict.conflict_estimator import ConflictEstimator
from stochmapf.graph.path import Command
from stochmapf.planner import _lowlevel
from stochmapf.planner import _solution_io

smapf = SMAPFDialog()
logger = smapf.functionlogger(__name__)

CONFLICT_FREE = "conflict_free"
TIMEOUT_BEST_EFFORT = "timeout_best_effort"
NO_SOLUTION = "no_solution"


# ======================================================================================
# Types
# ======================================================================================


class FixedCommand(namedtuple("FixedCommand", "start_time u finish_time v")):
    """The command an agent is executing when a plan is requested.

    A move has u != v and finish_time = start_time + w(u, v) (planned, no
    delay). A stationary agent has u == v; if finish_time > start_time it
    is a wait, otherwise the command is degenerate and adds nothing to the
    path.
    """

    __slots__ = ()

    def __new__(cls, start_time, u, finish_time, v):
        start_time = float(start_time)
        finish_time = float(finish_time)
        if finish_time < start_time:
            raise ValueError(
                "Fixed command finishes ({}) before it starts ({})".format(
                    finish_time, start_time
                )
            )
        return super().__new__(cls, start_time, int(u), finish_time, int(v))

    @classmethod
    def stationary(cls, vertex, time=0.0):
        """Degenerate fixed command of an agent standing at vertex."""
        return cls(time, vertex, time, vertex)

    @property
    def is_move(self):
        return self.u != self.v

    @property
    def is_degenerate(self):
        return self.u == self.v and self.finish_time <= self.start_time

    def to_command(self, graph):
        """Return the Command heading a path, or None if degenerate."""
        if self.is_move:
            return Command(self.u, self.v, graph.weight(self.u, self.v))
        if self.is_degenerate:
            return None
        return Command(self.u, self.u, self.finish_time - self.start_time)

    def matches(self, path, tol=TIME_EPS):
        """True if a path begins with this fixed command."""
        if path.origin != self.u or abs(path.start_time - self.start_time) > tol:
            return False
        if self.is_degenerate:
            return not path.fixed
        if not path.fixed or not path.commands:
            return False
        head = path.commands[0]
        if (head.u, head.v) != (self.u, self.v):
            return False
        return abs(path.start_time + head.d - self.finish_time) <= tol * max(
            1.0, self.finish_time
        )


class OnlineInstance:
    """The planning problem at some time: fixed commands, goals and time limit.

    Args:
        graph (Graph): The map.
        fixed (list): FixedCommand per agent (agent id = position).
        goals (list): Goal vertex per agent.
        calc_time_limit (float): Wall clock limit of the search in seconds.
    """

    def __init__(self, graph, fixed, goals, calc_time_limit=T_LIMIT):
        if len(fixed) != len(goals):
            raise ValueError("Need one fixed command and one goal per agent")
        if not calc_time_limit > 0.0:
            raise ValueError("calc_time_limit must be positive")
        for agent, (fcmd, goal) in enumerate(zip(fixed, goals)):
            if not graph.has_vertex(goal):
                raise ValueError("Goal {} of agent {} not in graph".format(goal, agent))
            if not (graph.has_vertex(fcmd.u) and graph.has_vertex(fcmd.v)):
                raise ValueError("Fixed command of agent {} off graph".format(agent))
            if fcmd.is_move:
                wgt = graph.weight(fcmd.u, fcmd.v)
                span = fcmd.finish_time - fcmd.start_time
                if abs(span - wgt) > 1.0e-6 * max(1.0, wgt):
                    raise ValueError(
                        "Fixed move of agent {} lasts {}, edge weight is {}".format(
                            agent, span, wgt
                        )
                    )

        self._graph = graph
        self._fixed = list(fixed)
        self._goals = [int(goal) for goal in goals]
        self._calc_time_limit = float(calc_time_limit)

    @classmethod
    def from_task(cls, graph, task, calc_time_limit=T_LIMIT, time=0.0):
        """Initial instance of a task: every agent stands at its start."""
        fixed = [FixedCommand.stationary(start, time) for start in task.starts]
        return cls(graph, fixed, task.goals, calc_time_limit)

    def __repr__(self):
        return "{}(nagents={}, calc_time_limit={})".format(
            self.__class__.__name__, self.nagents, self._calc_time_limit
        )

    @property
    def graph(self):
        return self._graph

    @property
    def fixed(self):
        """List of FixedCommand per agent (read only)."""
        return self._fixed

    @property
    def goals(self):
        return self._goals

    @property
    def nagents(self):
        return len(self._fixed)

    @property
    def calc_time_limit(self):
        return self._calc_time_limit


class Constraint(namedtuple("Constraint", "agent u v t_start t_end")):
    """Forbid agent to start a move on (u, v) at t_start <= t < t_end.

    With u == v the constraint is a hold: the agent may not be at u at any
    time in the interval.
    """

    __slots__ = ()

    def __new__(cls, agent, u, v, t_start, t_end):
        t_start = float(t_start)
        t_end = float(t_end)
        if not t_start < t_end:
            raise ValueError(
                "Constraint interval [{}, {}) is empty".format(t_start, t_end)
            )
        return super().__new__(cls, int(agent), int(u), int(v), t_start, t_end)

    @property
    def edge(self):
        return (self.u, self.v)

    @property
    def is_hold(self):
        return self.u == self.v


@dataclass(frozen=True)
class PlannerConfig:
    """Settings of the high level search.

    Args:
        mode: One of "cbs", "stt" and "gstt".
        epsilon: Pairwise conflict probability threshold (stt, gstt).
        n_samples: Monte-Carlo samples per conflict estimate.
        seed: Seed of the Monte-Carlo generators.
        horizon_factor: Low level horizon as multiple of the unconstrained
            travel time lower bound.
        max_nodes: Optional cap on generated nodes; the search then returns
            as if it timed out.
    """

    mode: str = "gstt"
    epsilon: float = EPSILON
    n_samples: int = N_SAMPLES
    seed: int = 0
    horizon_factor: float = HORIZON_FACTOR
    max_nodes: int = None

    def __post_init__(self):
        if self.mode not in PLANNER_MODES:
            raise ValueError(
                "Mode must be one of {}, got {}".format(PLANNER_MODES, self.mode)
            )
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError("epsilon must be in (0, 1), got {}".format(self.epsilon))
        if self.n_samples < 1:
            raise ValueError("n_samples must be positive")
        if not self.horizon_factor > 0.0:
            raise ValueError("horizon_factor must be positive")

    @property
    def deterministic(self):
        return self.mode == "cbs"


class CTNode:
    """Constraint tree node."""

    __slots__ = ("node_id", "constraints", "solution", "cost", "p_max", "conflict")

    def __init__(self, node_id, constraints, solution, cost, p_max, conflict):
        self.node_id = node_id
        self.constraints = constraints
        self.solution = solution
        self.cost = cost
        self.p_max = p_max
        self.conflict = conflict

    def __repr__(self):
        return "CTNode(id={}, nconstraints={}, cost={:.3f}, p_max={:.4f})".format(
            self.node_id, len(self.constraints), self.cost, self.p_max
        )

    def priority(self, mode):
        if mode == "gstt":
            return (self.p_max, self.cost, self.node_id)
        return (self.cost, self.node_id)

    def paths(self):
        return [self.solution[agent] for agent in sorted(self.solution)]


class SearchResult(
    namedtuple(
        "SearchResult",
        "solution status cost p_max nodes_generated nodes_expanded calc_time",
    )
):
    """Outcome of :func:`high_level_search`; solution is a list of Path."""

    __slots__ = ()

    @property
    def timed_out(self):
        return self.status == TIMEOUT_BEST_EFFORT

    @property
    def conflict_free(self):
        return self.status == CONFLICT_FREE


# ======================================================================================
# Operations
# ======================================================================================


def solution_cost(solution):
    """Flowtime: sum of planned arrival times at the goals."""
    paths = solution.values() if isinstance(solution, dict) else solution
    return float(sum(path.end_time for path in paths))


def low_level_search(graph, agent, goal, constraints, fixed, horizon=None):
    """Earliest arrival path of one agent under constraints.

    The path begins with the fixed command (unless degenerate), then never
    starts a move inside a matching constraint interval. See
    :mod:`stochmapf.planner._lowlevel`.

    Raises:
        NoPathError: Goal not reachable within the horizon.
    """
    if isinstance(fixed, int):
        fixed = FixedCommand.stationary(fixed)
    return _lowlevel.astar(graph, agent, goal, constraints, fixed, horizon)


def make_constraint(conflict, agent, deterministic=False):
    """Return the Constraint resolving a conflict for one agent.

    Stochastic: the interval is the envelope of the realised start times of
    the command in the conflicting samples, extended to include the planned
    start. Deterministic: [planned start, planned start + w]; a move into an
    occupied vertex is also forbidden until it would arrive after the planned
    departure of the occupant. For the occupant the constraint is a hold
    covering the other agent's stay at the vertex.

    Raises:
        FixedCommandConstraintError: The agent's side of the conflict is its
            fixed command.
    """
    cmd, fixed, edge, window, planned = conflict.side(agent)
    if fixed:
        raise FixedCommandConstraintError(
            "Command {} of agent {} is fixed and cannot be constrained".format(
                cmd, agent
            )
        )

    u, v = edge
    if u == v:
        lo, hi = planned if deterministic else (
            min(window[0], planned[0]),
            max(window[1], planned[1]),
        )
        # occupancy is closed, the end itself is forbidden too
        hi = hi + MIN_CONSTRAINT_WIDTH if math.isfinite(hi) else hi
    elif deterministic:
        lo, hi = planned
        release = conflict.release(agent)
        if release is not None and math.isfinite(release):
            hi = max(hi, release - (planned[1] - planned[0]) + MIN_CONSTRAINT_WIDTH)
    else:
        lo = min(window[0], planned[0])
        hi = max(window[1], planned[0])

    if hi - lo < MIN_CONSTRAINT_WIDTH:
        lo, hi = planned[0], max(planned[1], planned[0] + MIN_CONSTRAINT_WIDTH)

    return Constraint(agent, u, v, lo, hi)


def _horizon(instance, factor):
    grf = instance.graph
    wmax = max((edge.weight for edge in grf.edges), default=1.0)
    lbound = max(
        grf.shortest_path_length(fcmd.v, goal)
        for fcmd, goal in zip(instance.fixed, instance.goals)
    )
    return factor * max(lbound, wmax)


class _HighLevel:
    """State of one high level search."""

    def __init__(self, instance, config, models):
        self.instance = instance
        self.config = config
        self.estimator = ConflictEstimator(
            models,
            n_samples=config.n_samples,
            seed=config.seed,
            zero_delay=config.deterministic,
            graph=instance.graph,
        )
        self.threshold = 0.0 if config.deterministic else config.epsilon
        self.horizon = _horizon(instance, config.horizon_factor)
        self.ids = itertools.count()
        self.generated = 0
        self.expanded = 0

    def replan(self, agent, constraints):
        return low_level_search(
            self.instance.graph,
            agent,
            self.instance.goals[agent],
            constraints,
            self.instance.fixed[agent],
            self.horizon,
        )

    def make_node(self, constraints, solution):
        report = self.estimator.evaluate(solution)
        conflict = report.first_conflict(self.threshold)
        p_max = report.p_max()[0]
        self.generated += 1
        return CTNode(
            next(self.ids),
            constraints,
            solution,
            solution_cost(solution),
            p_max,
            conflict,
        )

    def root(self):
        solution = {}
        for agent in range(self.instance.nagents):
            try:
                solution[agent] = self.replan(agent, ())
            except NoPathError as err:
                raise NoSolutionError(
                    "No initial path for agent {}: {}".format(agent, err), agent=agent
                ) from err
        return self.make_node((), solution)

    def children(self, node):
        conflict = node.conflict
        for agent in (conflict.agent_i, conflict.agent_j):
            try:
                con = make_constraint(conflict, agent, self.config.deterministic)
            except FixedCommandConstraintError:
                logger.debug("Skip fixed side, agent %s", agent)
                continue

            constraints = node.constraints + (con,)
            try:
                path = self.replan(agent, constraints)
            except NoPathError:
                logger.debug("No path for agent %s under %s", agent, con)
                continue

            solution = dict(node.solution)
            solution[agent] = path
            yield self.make_node(constraints, solution)


def _audit_pop(priority, queue):
    """Raise if a queued node ranks before the node just popped."""
    if queue:
        lowest = min(entry[0] for entry in queue)
        if lowest < priority:
            raise RuntimeError(
                "Queue order broken: popped {}, queued {}".format(priority, lowest)
            )


def _result(node, status, search, time0):
    return SearchResult(
        node.paths(),
        status,
        node.cost,
        node.p_max,
        search.generated,
        search.expanded,
        smapf.timer(time0),
    )


def high_level_search(instance, config=None, models=None):
    """Search a solution of an online instance.

    Args:
        instance (OnlineInstance): The problem.
        config (PlannerConfig): Mode, threshold and Monte-Carlo settings.
        models: EdgeModels or dict of GammaParams by edge key (learned
            parameters); not used in cbs mode.

    Returns:
        SearchResult with status "conflict_free", "timeout_best_effort" or,
        if the queue runs empty, "no_solution" with the root solution.

    Raises:
        NoSolutionError: Some agent has no path at the root.
    """
    config = config if config is not None else PlannerConfig()
    if models is None and not config.deterministic:
        raise ValueError("Mode {} needs delay models".format(config.mode))

    time0 = smapf.timer()
    search = _HighLevel(instance, config, models)
    root = search.root()

    queue = [(root.priority(config.mode), root)]
    while queue:
        elapsed = smapf.timer(time0)
        capped = config.max_nodes is not None and search.generated >= config.max_nodes
        if elapsed > instance.calc_time_limit or capped:
            top = queue[0][1]
            logger.info(
                "Search stopped after %.3f s and %s nodes, best p_max %.4f",
                elapsed,
                search.generated,
                top.p_max,
            )
            if top.conflict is None:
                return _result(top, CONFLICT_FREE, search, time0)
            return _result(top, TIMEOUT_BEST_EFFORT, search, time0)

        priority, node = heapq.heappop(queue)
        if logger.isEnabledFor(logging.DEBUG):
            _audit_pop(priority, queue)
        if node.conflict is None:
            logger.info(
                "Conflict free solution, cost %.3f, %s nodes",
                node.cost,
                search.generated,
            )
            return _result(node, CONFLICT_FREE, search, time0)

        search.expanded += 1
        for child in search.children(node):
            heapq.heappush(queue, (child.priority(config.mode), child))

    logger.warning("Constraint tree exhausted, return root solution")
    return _result(root, NO_SOLUTION, search, time0)


def solution_to_file(solution, wfile):
    """Export a solution (list or dict of Path) to a JSON file."""
    _solution_io.export_json(solution, wfile)


def solution_from_file(wfile):
    """Import a solution JSON file, return list of Path sorted by agent."""
    return _solution_io.import_json(wfile)
