# -*- coding: utf-8 -*-
"""The simulator module: discrete event execution of plans under true delays.

Agents execute their commands in order. Entering edge e draws a delay x from
the true gamma model of e, and the agent arrives after w(e) + x. Traffic rules:

* An agent may not enter (u, v) while some agent is inside (v, u). It waits
  at u until (v, u) is empty, and the edge wait counter increments once per
  blocking episode. An agent waiting to be inserted after a penalty counts
  the same way.
* An agent arriving at an occupied vertex v is handled by the remote
  operator: it is removed from (u, v) at t + w(u, v) * C, which may free
  (v, u) for others, and is inserted onto its next move edge at
  removal + w(next) * C. Without a next move it re-enters v at removal time,
  or later when v is vacated. The vertex conflict counter increments.

Events at equal times are handled in the order arrival, removal, edge
available, reinsert, enter, then by agent id. The event loop runs on a
:class:`simpy.Environment`.

Example::

    >>> sim = Simulator(graph, true_params, task, plan, SimConfig(seed=3))
    >>> sim.run()
    >>> sim.vertex_conflicts, sim.flowtime

"""

from collections import namedtuple
from dataclasses import dataclass

import numpy as np
import simpy

from stochmapf.common import SMAPFDialog, SMAPFDescription
from stochmapf.common.constants import C_PENALTY, MAX_SIM_EVENTS
from stochmapf.common.exceptions import (
    InconsistentFixedCommandError,
    InvalidPlanError,
    SimulationStalledError,
)
from stochmapf.delay.delay_model import sample_delay
from stochmapf.graph.graph import edge_key
from stochmapf.graph.path import validate_path
from stochmapf.planner.planner import FixedCommand, OnlineInstance
from stochmapf.simulator import _sim_trace

smapf = SMAPFDialog()
logger = smapf.functionlogger(__name__)

ARRIVAL = "arrival_at_vertex"
REMOVAL = "removal_after_penalty"
EDGE_AVAILABLE = "edge_became_available"
REINSERT = "reinsert_after_penalty"
ENTER = "enter_edge"

KIND_PRIORITY = {ARRIVAL: 0, REMOVAL: 1, EDGE_AVAILABLE: 2, REINSERT: 3, ENTER: 4}

_PRIORITY_STRIDE = 1 << 20

# agent status
IDLE = "idle"
WAITING = "waiting"
BLOCKED = "blocked"
TRAVERSING = "traversing"
PENALIZED = "penalized"
DONE = "done"


class SimEvent(namedtuple("SimEvent", "time kind agent payload")):
    """A simulator event; payload is an edge (u, v) or None."""

    __slots__ = ()

    def __new__(cls, time, kind, agent, payload=None):
        if kind not in KIND_PRIORITY:
            raise ValueError("Unknown event kind {}".format(kind))
        return super().__new__(cls, float(time), kind, int(agent), payload)


class DelayObservation(namedtuple("DelayObservation", "edge delay time")):
    """A realised delay on an edge, emitted when the agent arrives."""

    __slots__ = ()

    def __new__(cls, edge, delay, time):
        delay = float(delay)
        if not delay > 0.0:
            raise ValueError("Observed delay must be positive, got {}".format(delay))
        return super().__new__(cls, (int(edge[0]), int(edge[1])), delay, float(time))


StepResult = namedtuple("StepResult", "events observations")


@dataclass(frozen=True)
class SimConfig:
    """Simulator settings.

    Args:
        c_penalty: Multiplier of edge weights in the operator procedure.
        seed: Seed of the delay generator.
        zero_delay: Force all delays to zero; no observations are emitted.
        max_events: Event budget, exceeding it raises SimulationStalledError.
        record_trace: Keep a trace of all processed events.
        audit: Check vertex and edge exclusivity after every event.
    """

    c_penalty: float = C_PENALTY
    seed: int = 0
    zero_delay: bool = False
    max_events: int = MAX_SIM_EVENTS
    record_trace: bool = False
    audit: bool = False

    def __post_init__(self):
        if not 0.0 <= self.c_penalty < float("inf"):
            raise ValueError("c_penalty must be finite and non-negative")
        if self.max_events < 1:
            raise ValueError("max_events must be positive")


class _Scheduled(simpy.Event):
    """An event triggered after a delay with an explicit queue priority.

    Same as :class:`simpy.events.Timeout`, except for the priority.
    """

    def __init__(self, env, delay, priority, value):
        super().__init__(env)
        self._ok = True
        self._value = value
        env.schedule(self, priority, delay)


class _Agent:
    """Mutable execution state of one agent."""

    __slots__ = (
        "agent",
        "goal",
        "commands",
        "index",
        "status",
        "vertex",
        "edge",
        "delay",
        "fixed",
        "token",
        "episode",
        "reinsert_index",
        "target",
        "finish_time",
    )

    def __init__(self, agent, start, goal, commands):
        self.agent = agent
        self.goal = goal
        self.commands = list(commands)
        self.index = 0
        self.status = IDLE
        self.vertex = start
        self.edge = None
        self.delay = 0.0
        self.fixed = None
        self.token = 0
        self.episode = False
        self.reinsert_index = None
        self.target = None
        self.finish_time = None

    def next_move(self):
        for num in range(self.index, len(self.commands)):
            if self.commands[num].is_move:
                return num
        return None


class Simulator:
    """Discrete event simulator of one task.

    Args:
        graph (Graph): The map.
        true_params (dict): True GammaParams keyed by edge key.
        task (Task): Starts and goals.
        plan (list): One Path per agent, starting at time 0 at the start.
        config (SimConfig): Settings.

    Raises:
        InvalidPlanError: A path is not valid for its agent.
    """

    def __init__(self, graph, true_params, task, plan, config=None):
        self._graph = graph
        self._true = {edge_key(*key): val for key, val in true_params.items()}
        self._config = config if config is not None else SimConfig()
        self._rng = np.random.default_rng(self._config.seed)
        self._env = simpy.Environment(initial_time=0.0)

        paths = _paths_by_agent(plan, task.nagents)
        self._agents = []
        for agent, start, goal in task.agents():
            path = paths[agent]
            if path.start_time != 0.0 or path.fixed:
                raise InvalidPlanError(
                    "Initial path of agent {} not at t=0".format(agent)
                )
            if not validate_path(graph, path, start, goal):
                raise InvalidPlanError("Invalid path for agent {}".format(agent))
            self._agents.append(_Agent(agent, start, goal, path.commands))

        self._occupancy = {agt.vertex: agt.agent for agt in self._agents}
        self._occupants = {}
        self._edge_waiters = {}
        self._vertex_waiters = {}

        self._vertex_conflicts = 0
        self._edge_waits = 0
        self._observations = []
        self._trace = []
        self._nevents = 0
        self._processed = []
        self._new_obs = []
        self._detail = ""

        for agt in self._agents:
            if agt.commands:
                self._schedule(0.0, ENTER, agt)
            elif agt.vertex == agt.goal:
                self._finish(agt)

    def __repr__(self):
        return "{}(nagents={}, clock={}, done={})".format(
            self.__class__.__name__, len(self._agents), self.clock, self.is_done()
        )

    # ==================================================================================
    # Properties
    # ==================================================================================

    @property
    def graph(self):
        return self._graph

    @property
    def config(self):
        return self._config

    @property
    def clock(self):
        """Current simulated time."""
        return self._env.now

    @property
    def nagents(self):
        return len(self._agents)

    @property
    def vertex_conflicts(self):
        """Number of operator interventions (vertex conflicts)."""
        return self._vertex_conflicts

    @property
    def edge_waits(self):
        """Number of edge blocking episodes."""
        return self._edge_waits

    @property
    def observations(self):
        """List of all DelayObservation emitted so far."""
        return self._observations

    @property
    def trace(self):
        """List of trace records (only if config.record_trace)."""
        return self._trace

    @property
    def nevents(self):
        return self._nevents

    @property
    def finish_times(self):
        """Goal arrival time per agent, None if not done."""
        return [agt.finish_time for agt in self._agents]

    @property
    def flowtime(self):
        """Sum of the realised goal arrival times."""
        return float(sum(agt.finish_time or 0.0 for agt in self._agents))

    def status(self, agent):
        return self._agents[agent].status

    def position(self, agent):
        """Return (vertex, edge) of an agent; one of them is None."""
        agt = self._agents[agent]
        return agt.vertex, agt.edge

    def is_done(self):
        """True if every agent has arrived at its goal."""
        return all(agt.status == DONE for agt in self._agents)

    # ==================================================================================
    # Event loop
    # ==================================================================================

    def _schedule(self, delay, kind, agt, payload=None):
        priority = KIND_PRIORITY[kind] * _PRIORITY_STRIDE + agt.agent
        value = (kind, agt.agent, agt.token, payload)
        evt = _Scheduled(self._env, delay, priority, value)
        evt.callbacks.append(self._dispatch)

    def _dispatch(self, evt):
        kind, agent, token, payload = evt.value
        agt = self._agents[agent]
        self._detail = ""
        self._nevents += 1
        event = SimEvent(self._env.now, kind, agent, payload)

        if kind in (ENTER, REINSERT) and token != agt.token:
            self._detail = "stale"
        elif kind == ARRIVAL:
            self._on_arrival(agt, payload)
        elif kind == REMOVAL:
            self._on_removal(agt, payload)
        elif kind == EDGE_AVAILABLE:
            self._on_edge_available(payload)
        elif kind == REINSERT:
            self._on_reinsert(agt)
        else:
            self._begin(agt)

        self._processed.append(event)
        if self._config.record_trace:
            self._trace.append(_sim_trace.record(event, agt, self._detail))

    def step(self):
        """Process the next event.

        Returns:
            StepResult with the processed events and new observations.

        Raises:
            SimulationStalledError: No pending events while agents are not
                done, or the event budget is used up.
        """
        if self._env.peek() == float("inf"):
            if self.is_done():
                return StepResult((), ())
            raise SimulationStalledError(
                "No pending events at t={} with agents {} not done".format(
                    self.clock,
                    [agt.agent for agt in self._agents if agt.status != DONE],
                )
            )
        if self._nevents >= self._config.max_events:
            raise SimulationStalledError(
                "Event budget {} exceeded at t={}".format(
                    self._config.max_events, self.clock
                )
            )

        self._processed = []
        self._new_obs = []
        self._env.step()
        if self._config.audit:
            self.check_invariants()
        return StepResult(tuple(self._processed), tuple(self._new_obs))

    def run(self):
        """Step until all agents are done; return all observations."""
        while not self.is_done():
            self.step()
        logger.info(
            "Simulation done at t=%.3f, %s events, %s vertex conflicts, %s edge waits",
            self.clock,
            self._nevents,
            self._vertex_conflicts,
            self._edge_waits,
        )
        return self._observations

    # ==================================================================================
    # Handlers
    # ==================================================================================

    def _begin(self, agt):
        """Start the command at agt.index."""
        if agt.index >= len(agt.commands):
            if agt.vertex == agt.goal:
                self._finish(agt)
            else:
                agt.status = IDLE
            return

        cmd = agt.commands[agt.index]
        if cmd.u != agt.vertex:
            raise InvalidPlanError(
                "Agent {} at {} cannot start command {}".format(
                    agt.agent, agt.vertex, cmd
                )
            )
        if cmd.is_wait:
            now = self._env.now
            agt.status = WAITING
            agt.fixed = FixedCommand(now, cmd.u, now + cmd.d, cmd.u)
            agt.index += 1
            self._detail = "wait"
            self._schedule(cmd.d, ENTER, agt)
        else:
            self._try_enter(agt)

    def _try_enter(self, agt):
        """Enter the edge of the move agt.commands[agt.index], if allowed."""
        cmd = agt.commands[agt.index]
        u, v = cmd.u, cmd.v
        if self._occupants.get((v, u)):
            agt.status = BLOCKED
            self._edge_waiters.setdefault((v, u), []).append((agt.agent, agt.token))
            if not agt.episode:
                agt.episode = True
                self._edge_waits += 1
                logger.debug("Agent %s waits for edge (%s, %s)", agt.agent, v, u)
            self._detail = "blocked"
            return

        now = self._env.now
        if agt.vertex is not None:
            self._vacate(agt.vertex)
        agt.episode = False
        agt.vertex = None
        agt.edge = (u, v)
        agt.status = TRAVERSING
        self._occupants.setdefault((u, v), set()).add(agt.agent)

        wgt = self._graph.weight(u, v)
        if self._config.zero_delay:
            agt.delay = 0.0
        else:
            agt.delay = float(sample_delay(self._true[edge_key(u, v)], self._rng))
        agt.fixed = FixedCommand(now, u, now + wgt, v)
        agt.index += 1
        self._detail = "delay={!r}".format(agt.delay)
        self._schedule(wgt + agt.delay, ARRIVAL, agt, (u, v))

    def _vacate(self, vertex):
        del self._occupancy[vertex]
        for agent, _ in self._vertex_waiters.pop(vertex, []):
            self._schedule(0.0, REINSERT, self._agents[agent])

    def _leave_edge(self, agt, edge):
        occupants = self._occupants[edge]
        occupants.discard(agt.agent)
        if not occupants:
            self._schedule(0.0, EDGE_AVAILABLE, agt, edge)
        agt.edge = None

    def _occupy(self, agt, vertex):
        self._occupancy[vertex] = agt.agent
        agt.vertex = vertex
        agt.target = None
        agt.status = IDLE
        if agt.index >= len(agt.commands) and vertex == agt.goal:
            self._finish(agt)
        else:
            self._schedule(0.0, ENTER, agt)

    def _on_arrival(self, agt, edge):
        u, v = edge
        if not self._config.zero_delay:
            obs = DelayObservation(edge, agt.delay, self._env.now)
            self._observations.append(obs)
            self._new_obs.append(obs)

        if v not in self._occupancy:
            self._leave_edge(agt, edge)
            self._occupy(agt, v)
            return

        self._vertex_conflicts += 1
        self._detail = "vertex_conflict with agent {}".format(self._occupancy[v])
        logger.debug(
            "Agent %s arrives at %s occupied by agent %s",
            agt.agent,
            v,
            self._occupancy[v],
        )
        agt.status = PENALIZED
        cpen = self._config.c_penalty
        removal = self._graph.weight(u, v) * cpen

        nxt = agt.next_move()
        if nxt is None:
            agt.index = len(agt.commands)
            agt.reinsert_index = None
            agt.target = v
            agt.fixed = None
        else:
            agt.index = nxt
            agt.reinsert_index = nxt
            cmd = agt.commands[nxt]
            tins = (self._env.now + removal) + cmd.d * cpen
            agt.fixed = FixedCommand(tins, cmd.u, tins + cmd.d, cmd.v)
        self._schedule(removal, REMOVAL, agt, edge)

    def _on_removal(self, agt, edge):
        self._leave_edge(agt, edge)
        if agt.reinsert_index is not None:
            cmd = agt.commands[agt.reinsert_index]
            self._schedule(cmd.d * self._config.c_penalty, REINSERT, agt)
        else:
            self._enter_vertex(agt)

    def _on_reinsert(self, agt):
        if agt.status != PENALIZED:
            self._detail = "stale"
            return
        if agt.reinsert_index is not None:
            agt.index = agt.reinsert_index
            agt.reinsert_index = None
            self._try_enter(agt)
        else:
            self._enter_vertex(agt)

    def _enter_vertex(self, agt):
        """Goal blocked agent re-attempts entry of its vertex."""
        vertex = agt.target
        if vertex not in self._occupancy:
            self._occupy(agt, vertex)
            return
        agt.status = PENALIZED
        self._vertex_waiters.setdefault(vertex, []).append((agt.agent, agt.token))
        self._detail = "vertex_blocked"

    def _on_edge_available(self, edge):
        for agent, token in sorted(self._edge_waiters.pop(edge, [])):
            agt = self._agents[agent]
            if token != agt.token or agt.status != BLOCKED:
                continue
            self._try_enter(agt)
        self._detail = ""

    def _finish(self, agt):
        agt.status = DONE
        agt.fixed = None
        agt.finish_time = self._env.now

    # ==================================================================================
    # Re-planning
    # ==================================================================================

    def fixed_commands(self):
        """The fixed command of every agent at the current clock.

        In-flight moves report their planned finish time, i.e. without the
        delay. A waiting agent reports the rest of its wait. A penalized agent
        reports the move it will be inserted onto, or a stationary command at
        its vertex when it has no next move.
        """
        now = self._env.now
        fixed = []
        for agt in self._agents:
            if agt.status == TRAVERSING:
                fcmd = agt.fixed
            elif agt.status == WAITING and agt.fixed.finish_time > now:
                fcmd = FixedCommand(now, agt.vertex, agt.fixed.finish_time, agt.vertex)
            elif agt.status == PENALIZED:
                if agt.reinsert_index is not None:
                    fcmd = agt.fixed
                else:
                    fcmd = FixedCommand.stationary(agt.target, now)
            elif agt.status == BLOCKED and agt.vertex is None:
                cmd = agt.commands[agt.index]
                fcmd = FixedCommand(now, cmd.u, now + cmd.d, cmd.v)
            else:
                fcmd = FixedCommand.stationary(agt.vertex, now)
            fixed.append(fcmd)
        return fixed

    def to_online_instance(self, t_limit):
        """Snapshot the state as an OnlineInstance for the planner."""
        return OnlineInstance(
            self._graph,
            self.fixed_commands(),
            [agt.goal for agt in self._agents],
            t_limit,
        )

    def apply_plan(self, solution):
        """Replace the not yet started commands of all agents.

        Args:
            solution (list or dict): One Path per agent, each beginning with the
                agent's fixed command.

        Raises:
            InconsistentFixedCommandError: A path head differs from the fixed
                command.
            InvalidPlanError: A path is not valid to the agent's goal.
        """
        paths = _paths_by_agent(solution, len(self._agents))
        fixed = self.fixed_commands()
        for agt, fcmd in zip(self._agents, fixed):
            path = paths[agt.agent]
            if not fcmd.matches(path):
                raise InconsistentFixedCommandError(
                    "Path of agent {} does not begin with {}".format(agt.agent, fcmd)
                )
            if not validate_path(self._graph, path, fcmd.u, agt.goal):
                raise InvalidPlanError("Invalid path for agent {}".format(agt.agent))

        for agt, fcmd in zip(self._agents, fixed):
            commands = list(paths[agt.agent].commands)
            if agt.status == PENALIZED:
                agt.commands = commands
                agt.index = 0
                if agt.reinsert_index is not None:
                    agt.reinsert_index = 0
            elif agt.status == BLOCKED and agt.vertex is None:
                agt.commands = commands
                agt.index = 0
            elif not fcmd.is_degenerate:
                agt.commands = commands
                agt.index = 1
            else:
                agt.token += 1
                agt.commands = commands
                agt.index = 0
                if commands:
                    agt.status = IDLE
                    self._schedule(0.0, ENTER, agt)
                elif agt.status != DONE:
                    self._finish(agt)
        logger.debug("Applied new plan at t=%.3f", self.clock)

    # ==================================================================================
    # Audit, describe and trace
    # ==================================================================================

    def check_invariants(self):
        """Check vertex and edge exclusivity, raise RuntimeError if violated."""
        seen = {}
        for agt in self._agents:
            if agt.vertex is not None:
                if agt.vertex in seen:
                    raise RuntimeError(
                        "Agents {} and {} share vertex {}".format(
                            seen[agt.vertex], agt.agent, agt.vertex
                        )
                    )
                seen[agt.vertex] = agt.agent
        for (u, v), occupants in self._occupants.items():
            if occupants and self._occupants.get((v, u)):
                raise RuntimeError("Edge ({}, {}) used in both directions".format(u, v))
        return True

    def describe(self, flush=True):
        """Describe the simulation state by printing to stdout."""
        dsc = SMAPFDescription()
        dsc.title("Description of {} instance".format(self.__class__.__name__))
        dsc.txt("Object ID", id(self))
        dsc.txt("Clock", self.clock)
        dsc.txt("Events processed", self._nevents)
        dsc.txt("Agents done", sum(agt.status == DONE for agt in self._agents))
        dsc.txt("Vertex conflicts", self._vertex_conflicts)
        dsc.txt("Edge waits", self._edge_waits)
        dsc.txt("Observations", len(self._observations))
        dsc.txt("Penalty factor", self._config.c_penalty)

        if flush:
            dsc.flush()
            return None

        return dsc.astext()

    def trace_to_file(self, wfile):
        """Export the event trace to a JSON Lines file."""
        _sim_trace.export_jsonl(self._trace, wfile)


def _paths_by_agent(plan, nagents):
    paths = list(plan.values() if isinstance(plan, dict) else plan)
    byagent = {path.agent: path for path in paths}
    if sorted(byagent) != list(range(nagents)):
        raise InvalidPlanError(
            "Plan must hold one path per agent 0..{}".format(nagents - 1)
        )
    return byagent


# ======================================================================================
# Functional interface
# ======================================================================================


def init_sim(graph, true_params, task, plan, config=None):
    """Make a Simulator with agents at their starts at clock 0."""
    return Simulator(graph, true_params, task, plan, config)


def step(state):
    """Process the next event of a Simulator, see :meth:`Simulator.step`."""
    return state.step()


def run(state):
    return state.run()


def apply_plan(state, solution):
    state.apply_plan(solution)


def to_online_instance(state, t_limit):
    return state.to_online_instance(t_limit)


def is_done(state):
    return state.is_done()
