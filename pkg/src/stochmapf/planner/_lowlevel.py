# -*- coding: utf-8 -*-
"""Private module, single agent A* in continuous time under constraints.

Search states are (vertex, time). A state has two kinds of successors: a move
along an incident edge that is not forbidden at the current time, and a wait
at the current vertex until a time where some constraint of interest
expires. Move constraints forbid starting a move on (u, v) at t with
t_start <= t < t_end; hold constraints (u == v) forbid being at u at any time
in [t_start, t_end).

Two states at the same vertex whose times fall between the same pair of
consecutive constraint boundaries face the same constraints, so only the
earlier one is kept.
"""

import bisect
import heapq
import itertools
import math

from stochmapf.common import SMAPFDialog
from stochmapf.common.constants import HORIZON_FACTOR
from stochmapf.common.exceptions import NoPathError
from stochmapf.graph.path import Command, Path

smapf = SMAPFDialog()
logger = smapf.functionlogger(__name__)


class _ConstraintTable:
    """Constraints of one agent, indexed for the search."""

    def __init__(self, graph, constraints):
        self.moves = {}
        self.holds = {}
        bounds = set()
        for con in constraints:
            if con.u == con.v:
                self.holds.setdefault(con.u, []).append((con.t_start, con.t_end))
                for nbr, wgt in graph.neighbors(con.u):
                    bounds.update((con.t_start - wgt, con.t_end - wgt))
            else:
                self.moves.setdefault((con.u, con.v), []).append(
                    (con.t_start, con.t_end)
                )
            bounds.update((con.t_start, con.t_end))
        self.bounds = sorted(bound for bound in bounds if bound != float("inf"))
        self.latest = max(
            (con.t_end for con in constraints if con.t_end != float("inf")),
            default=None,
        )

    def move_forbidden(self, u, v, tstart):
        return any(lo <= tstart < hi for lo, hi in self.moves.get((u, v), ()))

    def arrival_forbidden(self, v, tarr):
        return any(lo <= tarr < hi for lo, hi in self.holds.get(v, ()))

    def wait_forbidden(self, v, tfrom, tto):
        return any(tfrom < hi and lo <= tto for lo, hi in self.holds.get(v, ()))

    def goal_accepted(self, v, tarr):
        return all(hi <= tarr for _, hi in self.holds.get(v, ()))

    def segment(self, tval):
        return bisect.bisect_right(self.bounds, tval)

    def wait_targets(self, graph, v, tnow):
        """Return (t_end, w) pairs: wait until t_end - w, then a move of w.

        Covers move constraints at v (w = 0) and holds at the neighbours.
        """
        targets = set()
        for nbr, wgt in graph.neighbors(v):
            for _, hi in self.moves.get((v, nbr), ()):
                if hi > tnow:
                    targets.add((hi, 0.0))
            for _, hi in self.holds.get(nbr, ()):
                if hi - wgt > tnow:
                    targets.add((hi, wgt))
        return sorted(pair for pair in targets if pair[0] != float("inf"))


def _heuristic(graph, goal):
    if graph.euclidean:
        return lambda vid: graph.distance(vid, goal)
    dists = graph.distances_to(goal)
    return lambda vid: dists[vid]


def default_horizon(graph, start, goal):
    """Horizon duration of a search from start to goal."""
    wmax = max(edge.weight for edge in graph.edges) if graph.nedges else 1.0
    return HORIZON_FACTOR * max(graph.shortest_path_length(start, goal), wmax)


def _wait_duration(tfrom, tend, wgt):
    """Wait duration d with (tfrom + d) + wgt >= tend in floating point."""
    dur = tend - wgt - tfrom
    while (tfrom + dur) + wgt < tend:
        dur = math.nextafter(dur, math.inf)
    return dur


def astar(graph, agent, goal, constraints, fixed, horizon=None):
    """Earliest arrival path under constraints, headed by the fixed command.

    Args:
        graph (Graph): The map.
        agent (int): Agent id; only constraints of this agent apply.
        goal (int): Goal vertex.
        constraints (iterable): Constraint objects.
        fixed (FixedCommand): The command the path must begin with.
        horizon (float): Search duration after the fixed command finishes,
            extended by the latest constraint end. Default is a multiple of
            the unconstrained travel time.

    Returns:
        Path

    Raises:
        NoPathError: The goal cannot be reached within the horizon.
    """
    table = _ConstraintTable(
        graph, [con for con in constraints if con.agent == agent]
    )

    head = fixed.to_command(graph)
    vstart = fixed.v
    tstart = fixed.start_time + head.d if head is not None else fixed.start_time

    if horizon is None:
        horizon = default_horizon(graph, vstart, goal)
    tmax = tstart + horizon
    if table.latest is not None and table.latest > tstart:
        tmax += table.latest - tstart

    hfunc = _heuristic(graph, goal)
    counter = itertools.count()

    # node: (vertex, time, parent node index, step)
    nodes = [(vstart, tstart, None, None)]
    best = {(vstart, table.segment(tstart)): tstart}
    queue = [(tstart + hfunc(vstart), hfunc(vstart), next(counter), 0)]

    def _push(vid, tval, parent, step):
        key = (vid, table.segment(tval))
        if key in best and best[key] <= tval:
            return
        best[key] = tval
        nodes.append((vid, tval, parent, step))
        hval = hfunc(vid)
        heapq.heappush(queue, (tval + hval, hval, next(counter), len(nodes) - 1))

    found = None
    nexpanded = 0
    while queue:
        _, _, _, index = heapq.heappop(queue)
        vid, tnow = nodes[index][0], nodes[index][1]
        if best.get((vid, table.segment(tnow)), tnow) < tnow:
            continue
        nexpanded += 1

        if vid == goal and table.goal_accepted(goal, tnow):
            found = index
            break

        for nbr, wgt in graph.neighbors(vid):
            if table.move_forbidden(vid, nbr, tnow):
                continue
            tarr = tnow + wgt
            if tarr > tmax or table.arrival_forbidden(nbr, tarr):
                continue
            _push(nbr, tarr, index, (vid, nbr, wgt))

        for tend, wgt in table.wait_targets(graph, vid, tnow):
            dur = _wait_duration(tnow, tend, wgt)
            tto = tnow + dur
            if dur <= 0.0 or tto > tmax or table.wait_forbidden(vid, tnow, tto):
                continue
            _push(vid, tto, index, (vid, vid, dur))

    if found is None:
        raise NoPathError(
            "No path for agent {} from {} to {} before t={:.3f}".format(
                agent, vstart, goal, tmax
            )
        )

    steps = []
    index = found
    while nodes[index][2] is not None:
        steps.append(nodes[index][3])
        index = nodes[index][2]
    commands = [head] if head is not None else []
    for u, v, dur in steps[::-1]:
        commands.append(Command(u, v, dur))

    logger.debug(
        "Agent %s: %s states expanded, arrival %.3f", agent, nexpanded, nodes[found][1]
    )
    return Path(
        agent,
        commands,
        start_time=fixed.start_time,
        origin=fixed.u,
        fixed=head is not None,
    )
