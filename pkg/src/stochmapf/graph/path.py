# -*- coding: utf-8 -*-
"""Commands, paths and tasks.

A Path is a sequence of commands ``(u, v, d)``: a move along edge (u, v)
taking d = w(u, v), or a wait at u (u == v) of positive duration d. Paths are
anchored at an absolute ``start_time``; in online re-planning the first
command may be the agent's fixed command (``fixed=True``).
"""

from collections import namedtuple

from stochmapf.common import SMAPFDialog
from stochmapf.common.constants import TIME_EPS

smapf = SMAPFDialog()
logger = smapf.functionlogger(__name__)


class Command(namedtuple("Command", "u v d")):
    """A move (u != v) or wait (u == v) command with duration d > 0."""

    __slots__ = ()

    def __new__(cls, u, v, d):
        d = float(d)
        if not d > 0.0:
            raise ValueError("Command duration must be positive, got {}".format(d))
        return super().__new__(cls, int(u), int(v), d)

    @property
    def is_wait(self):
        return self.u == self.v

    @property
    def is_move(self):
        return self.u != self.v


class Path(namedtuple("Path", "agent commands start_time origin fixed")):
    """A planned path for one agent.

    Args:
        agent (int): Agent id.
        commands (sequence): Command objects (or (u, v, d) tuples).
        start_time (float): Absolute start time of the first command.
        origin (int, optional): Vertex where the path begins; derived from the
            first command when omitted, required for empty paths.
        fixed (bool): True if the first command is the agent's fixed command.
    """

    __slots__ = ()

    def __new__(cls, agent, commands, start_time=0.0, origin=None, fixed=False):
        cmds = tuple(
            cmd if isinstance(cmd, Command) else Command(*cmd) for cmd in commands
        )
        if origin is None:
            if not cmds:
                raise ValueError("An empty path needs an origin vertex")
            origin = cmds[0].u
        if fixed and not cmds:
            raise ValueError("A path flagged fixed needs at least one command")
        return super().__new__(
            cls, int(agent), cmds, float(start_time), int(origin), bool(fixed)
        )

    @property
    def ncommands(self):
        return len(self.commands)

    @property
    def duration(self):
        return sum(cmd.d for cmd in self.commands)

    @property
    def end_time(self):
        """Planned (zero-delay) arrival time at the destination."""
        return self.start_time + self.duration

    @property
    def destination(self):
        return self.commands[-1].v if self.commands else self.origin

    def timed(self):
        """Return list of (command, planned start, planned end)."""
        result = []
        tcur = self.start_time
        for cmd in self.commands:
            result.append((cmd, tcur, tcur + cmd.d))
            tcur += cmd.d
        return result

    def start_times(self):
        """Planned start time of every command."""
        return [entry[1] for entry in self.timed()]

    def with_leading_wait(self, duration):
        """Return a copy with a wait of given duration inserted at the start."""
        cmds = (Command(self.origin, self.origin, duration),) + self.commands
        return Path(self.agent, cmds, self.start_time, self.origin, False)


class Task(namedtuple("Task", "task_id starts goals")):
    """Start and goal vertex per agent; agent i has starts[i] and goals[i]."""

    __slots__ = ()

    def __new__(cls, task_id, starts, goals):
        starts = tuple(int(vid) for vid in starts)
        goals = tuple(int(vid) for vid in goals)
        if len(starts) != len(goals):
            raise ValueError("Task needs equally many starts and goals")
        if len(set(starts)) != len(starts):
            raise ValueError(
                "Two agents share a start vertex in task {}".format(task_id)
            )
        if len(set(goals)) != len(goals):
            raise ValueError(
                "Two agents share a goal vertex in task {}".format(task_id)
            )
        return super().__new__(cls, int(task_id), starts, goals)

    @property
    def nagents(self):
        return len(self.starts)

    def agents(self):
        """Iterate (agent, start, goal)."""
        return zip(range(self.nagents), self.starts, self.goals)


def validate_path(graph, path, start, goal):
    """Return True if path is valid on the graph from start to goal.

    A path is valid if the first command starts at ``start``, the last command
    ends at ``goal``, consecutive commands chain, every move follows an edge
    with duration equal to its weight, and every wait has positive duration.

    Args:
        graph (Graph): The graph.
        path (Path or list): A Path or a list of Command / (u, v, d) tuples.
        start (int): Start vertex.
        goal (int): Goal vertex.
    """
    try:
        if isinstance(path, Path):
            commands = path.commands
            if path.origin != start:
                return False
        else:
            commands = [
                cmd if isinstance(cmd, Command) else Command(*cmd) for cmd in path
            ]
    except (TypeError, ValueError):
        return False

    if not graph.has_vertex(start) or not graph.has_vertex(goal):
        return False

    if not commands:
        return start == goal

    if commands[0].u != start or commands[-1].v != goal:
        return False

    previous = start
    for cmd in commands:
        if cmd.u != previous:
            return False
        if cmd.is_move:
            if not graph.has_edge(cmd.u, cmd.v):
                return False
            wgt = graph.weight(cmd.u, cmd.v)
            if abs(cmd.d - wgt) > TIME_EPS * max(1.0, wgt):
                return False
        elif not cmd.d > 0.0:
            return False
        previous = cmd.v

    return True
