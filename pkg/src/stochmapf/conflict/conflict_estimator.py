# -*- coding: utf-8 -*-
"""Monte-Carlo estimation of conflict probabilities between planned paths.

Every path is realised n_samples times at once: a realisation adds a gamma
delay from the (learned) edge model to every move, waits keep their planned
duration. Realised times are held in (n_samples, n_commands) arrays so that
the traffic rules can be checked for all samples with numpy.

Traffic rules checked on a pair of realised schedules:

* edge conflict: two moves on (u, v) and (v, u) overlap in time, the
  traversal intervals are open;
* vertex conflict: an agent arrives at a vertex while another agent occupies
  it. An agent occupies a vertex from its arrival (or from the path start) to
  the start of its next move, or forever at the end of its path. Occupancy is
  closed at both ends, since the simulator handles arrivals before departures
  at equal times.

Each conflicting realisation counts towards one command pair only, the
earliest violation. A command index is attributed to each side. In a vertex
conflict the arriving agent gets the move that brought it to the vertex and
the occupant gets a stay key: the move that brought it there, the pseudo
index ``len(commands)`` when it sits at the end of its path, or
:data:`ORIGIN` when it has not moved yet.

A stay can be constrained with a hold unless it is pinned when the other
agent arrives. A stay is pinned at the path start (and through a fixed
head wait), and at the arrival of a fixed head move.
"""

from collections import namedtuple

import numpy as np

from stochmapf.common import SMAPFDialog
from stochmapf.common.constants import N_SAMPLES, TIME_EPS

smapf = SMAPFDialog()
logger = smapf.functionlogger(__name__)

FIXED = -1
ORIGIN = -3

_NONE = -2

EDGE = "edge"
VERTEX = "vertex"

# which side of a vertex conflict is the occupant
_OCC_NONE = -1
_OCC_I = 0
_OCC_J = 1


class Conflict(
    namedtuple(
        "Conflict",
        "agent_i agent_j cmd_i cmd_j probability fixed_i fixed_j "
        "earliest_expected_time kind edge_i edge_j "
        "window_i window_j planned_i planned_j count release_i release_j",
    )
):
    """A conflict between a command of agent_i and a command of agent_j.

    ``probability`` is the estimated probability of this command pair.
    For a move ``window_*`` is the (min, max) envelope of the realised start
    times of the command over the conflicting samples and ``planned_*`` the
    planned (start, start + duration). For the occupant of a vertex conflict
    the edge is (vertex, vertex) and the windows hold the occupancy
    (arrival, departure) of the arriving agent. Fixed sides have None
    windows and edges.

    ``release_*`` is set on the arriving side of a vertex conflict: the
    planned time the occupant leaves the vertex (inf for a goal).
    """

    __slots__ = ()

    def side(self, agent):
        """Return (cmd, fixed, edge, window, planned) for one of the agents."""
        if agent == self.agent_i:
            return self.cmd_i, self.fixed_i, self.edge_i, self.window_i, self.planned_i
        if agent == self.agent_j:
            return self.cmd_j, self.fixed_j, self.edge_j, self.window_j, self.planned_j
        raise ValueError("Agent {} is not part of the conflict".format(agent))

    def release(self, agent):
        """Planned departure of the occupant, for the arriving agent; else None."""
        if agent == self.agent_i:
            return self.release_i
        if agent == self.agent_j:
            return self.release_j
        raise ValueError("Agent {} is not part of the conflict".format(agent))


class PairEstimate(
    namedtuple(
        "PairEstimate",
        "agent_i agent_j probability counts mean_time sample_time sample_cmds "
        "sample_kind sample_occupant",
    )
):
    """Monte-Carlo result for one agent pair.

    ``counts`` maps (cmd_i, cmd_j) to the number of samples attributed to it,
    ``sample_time`` is the earliest conflict time per sample (inf if none)
    and ``sample_cmds`` the attributed (cmd_i, cmd_j) per sample.
    ``sample_occupant`` is 0 when agent_i occupied the vertex, 1 for agent_j
    and -1 for edge conflicts and conflict free samples.
    """

    __slots__ = ()

    @property
    def nsamples(self):
        return self.sample_time.size

    def pair_probability(self, cmd_pair):
        return self.counts.get(cmd_pair, 0) / float(self.nsamples)

    def max_pair(self):
        """Return (cmd pair, probability) of the most frequent pair, or None."""
        if not self.counts:
            return None
        best = max(sorted(self.counts), key=lambda key: self.counts[key])
        return best, self.pair_probability(best)


_Visit = namedtuple("_Visit", "vertex arrive_cmd depart_cmd")


def _path_visits(path):
    visits = []
    current = [path.origin, FIXED, None]
    for num, cmd in enumerate(path.commands):
        if cmd.is_move:
            current[2] = num
            visits.append(_Visit(*current))
            current = [cmd.v, num, None]
    visits.append(_Visit(*current))
    return visits


def _params_lookup(models):
    if models is None:
        return None
    if hasattr(models, "map_params"):
        return models.map_params
    table = {(min(key), max(key)): val for key, val in models.items()}

    def _lookup(u, v):
        return table[(min(u, v), max(u, v))]

    return _lookup


class TimedSchedule:
    """Realised timing of a path, for one or many samples.

    Args:
        path (Path): The planned path.
        starts (ndarray): Realised start time per (sample, command).
        ends (ndarray): Realised end time per (sample, command).
        start_time (float): Time the path starts.
    """

    def __init__(self, path, starts, ends, start_time):
        self._path = path
        self._starts = starts
        self._ends = ends
        self._start_time = float(start_time)
        self._visits = _path_visits(path)

    def __repr__(self):
        return "{}(agent={}, ncommands={}, nsamples={})".format(
            self.__class__.__name__, self.agent, self.ncommands, self.nsamples
        )

    @property
    def agent(self):
        return self._path.agent

    @property
    def path(self):
        return self._path

    @property
    def commands(self):
        return self._path.commands

    @property
    def ncommands(self):
        return len(self._path.commands)

    @property
    def nsamples(self):
        return self._starts.shape[0]

    @property
    def starts(self):
        """Realised start times, shape (nsamples, ncommands)."""
        return self._starts

    @property
    def ends(self):
        """Realised end times, shape (nsamples, ncommands)."""
        return self._ends

    @property
    def start_time(self):
        return self._start_time

    @property
    def visits(self):
        return self._visits

    def end_time(self):
        """Realised completion time per sample."""
        if self.ncommands == 0:
            return np.full(self.nsamples, self._start_time)
        return self._ends[:, -1]

    def entries(self, sample=0):
        """Return list of (command, start, end) for one sample."""
        return [
            (cmd, float(self._starts[sample, num]), float(self._ends[sample, num]))
            for num, cmd in enumerate(self.commands)
        ]

    def arrival(self, visit):
        if visit.arrive_cmd == FIXED:
            return np.full(self.nsamples, self._start_time)
        return self._ends[:, visit.arrive_cmd]

    def departure(self, visit):
        if visit.depart_cmd is None:
            return np.full(self.nsamples, np.inf)
        return self._starts[:, visit.depart_cmd]

    def visit_arriving_by(self, cmd):
        for visit in self._visits:
            if visit.arrive_cmd == cmd:
                return visit
        raise ValueError("Command {} is not a move of agent {}".format(cmd, self.agent))

    def stay_key(self, visit):
        """Command index charged to this agent when it occupies the vertex."""
        if visit.depart_cmd is None:
            return self.ncommands
        if visit.arrive_cmd == FIXED:
            return ORIGIN
        return visit.arrive_cmd

    def stay_visit(self, key):
        """Inverse of :meth:`stay_key`."""
        if key == self.ncommands:
            return self._visits[-1]
        if key == ORIGIN:
            return self._visits[0]
        return self.visit_arriving_by(key)

    def pinned_until(self, visit):
        """Time per sample up to which a stay is fixed, or None if it is free."""
        fixed_head = self._path.fixed and self.ncommands > 0
        if visit.arrive_cmd == FIXED:
            if fixed_head and not self.commands[0].is_move:
                return self._ends[:, 0]
            return np.full(self.nsamples, self._start_time)
        if visit.arrive_cmd == 0 and fixed_head:
            return self._ends[:, 0]
        return None

    def is_fixed(self, cmd):
        """True if the move cannot be constrained."""
        return cmd == FIXED or (cmd == 0 and self._path.fixed)


def realize_schedule(
    path, start_time, models, rng, n_samples=1, zero_delay=False, graph=None
):
    """Realise a path under sampled delays.

    Each move takes its planned duration w plus a fresh draw from the gamma
    model of the edge; waits are exact. Draws are made command by command, so
    the result is deterministic given the generator state.

    Args:
        path (Path): Planned path.
        start_time (float): Time the path starts; None for path.start_time.
        models: EdgeModels, or dict of GammaParams by edge key. May be None in
            zero delay mode.
        rng (numpy.random.Generator): Random generator.
        n_samples (int): Number of realisations.
        zero_delay (bool): All delays are zero (planned timing).
        graph (Graph, optional): Take move durations from the graph weights.

    Returns:
        TimedSchedule
    """
    if n_samples < 1:
        raise ValueError("n_samples must be at least 1")

    start_time = path.start_time if start_time is None else float(start_time)
    lookup = None if zero_delay else _params_lookup(models)

    ncmd = len(path.commands)
    durations = np.empty((n_samples, ncmd + 1), dtype=np.float64)
    durations[:, 0] = start_time
    for num, cmd in enumerate(path.commands):
        dur = graph.weight(cmd.u, cmd.v) if graph is not None and cmd.is_move else cmd.d
        durations[:, num + 1] = dur
        if cmd.is_move and lookup is not None:
            params = lookup(cmd.u, cmd.v)
            durations[:, num + 1] += rng.gamma(params.shape, params.scale, n_samples)

    times = np.cumsum(durations, axis=1)
    return TimedSchedule(path, times[:, :-1], times[:, 1:], start_time)


def _candidates(s_i, s_j):
    """Yield (times, mask, cmd_i, cmd_j, kind, occupant) of each possible violation."""
    moves_j = {}
    for num, cmd in enumerate(s_j.commands):
        if cmd.is_move:
            moves_j.setdefault((cmd.u, cmd.v), []).append(num)

    for num_i, cmd in enumerate(s_i.commands):
        if not cmd.is_move:
            continue
        for num_j in moves_j.get((cmd.v, cmd.u), []):
            st_i = s_i.starts[:, num_i]
            st_j = s_j.starts[:, num_j]
            mask = (st_i < s_j.ends[:, num_j]) & (st_j < s_i.ends[:, num_i])
            yield np.maximum(st_i, st_j), mask, num_i, num_j, EDGE, _OCC_NONE

    for arriving, occupant, role in ((s_i, s_j, _OCC_J), (s_j, s_i, _OCC_I)):
        by_vertex = {}
        for visit in occupant.visits:
            by_vertex.setdefault(visit.vertex, []).append(visit)
        for visit_a in arriving.visits:
            if visit_a.arrive_cmd == FIXED or visit_a.vertex not in by_vertex:
                continue
            t_arr = arriving.arrival(visit_a)
            for visit_o in by_vertex[visit_a.vertex]:
                mask = (occupant.arrival(visit_o) <= t_arr) & (
                    t_arr <= occupant.departure(visit_o)
                )
                cmd_a = visit_a.arrive_cmd
                cmd_o = occupant.stay_key(visit_o)
                if role == _OCC_I:
                    yield t_arr, mask, cmd_o, cmd_a, VERTEX, role
                else:
                    yield t_arr, mask, cmd_a, cmd_o, VERTEX, role


def schedules_conflict(s_i, s_j, sample=0):
    """Return the earliest violation (cmd_i, cmd_j, time) of one sample, or None.

    The verdict and the time are symmetric in the arguments.
    """
    best = None
    for times, mask, cmd_i, cmd_j, _, _ in _candidates(s_i, s_j):
        if mask[sample] and (best is None or times[sample] < best[2]):
            best = (cmd_i, cmd_j, float(times[sample]))
    return best


def _estimate_pair(s_i, s_j):
    nsmp = s_i.nsamples
    if s_j.nsamples != nsmp:
        raise ValueError("Schedules must have the same number of samples")

    cands = list(_candidates(s_i, s_j))
    sample_time = np.full(nsmp, np.inf)
    sample_cmds = np.full((nsmp, 2), _NONE, dtype=np.int64)
    sample_kind = np.full(nsmp, "", dtype=object)
    sample_occupant = np.full(nsmp, _OCC_NONE, dtype=np.int64)
    if cands:
        times = np.vstack([np.where(cand[1], cand[0], np.inf) for cand in cands]).T
        first = np.argmin(times, axis=1)
        sample_time = times[np.arange(nsmp), first]
        hit = np.isfinite(sample_time)
        cmdtab = np.array([(cand[2], cand[3]) for cand in cands], dtype=np.int64)
        kindtab = np.array([cand[4] for cand in cands], dtype=object)
        occtab = np.array([cand[5] for cand in cands], dtype=np.int64)
        sample_cmds[hit] = cmdtab[first[hit]]
        sample_kind[hit] = kindtab[first[hit]]
        sample_occupant[hit] = occtab[first[hit]]

    hit = np.isfinite(sample_time)
    counts = {}
    for cmd_i, cmd_j in sample_cmds[hit].tolist():
        counts[(cmd_i, cmd_j)] = counts.get((cmd_i, cmd_j), 0) + 1

    nhit = int(np.count_nonzero(hit))
    return PairEstimate(
        s_i.agent,
        s_j.agent,
        nhit / float(nsmp),
        counts,
        float(np.mean(sample_time[hit])) if nhit else np.inf,
        sample_time,
        sample_cmds,
        sample_kind,
        sample_occupant,
    )


def _move_side(sched, cmd, samples, planned_sched, release=None):
    """Return (fixed, edge, window, planned, release) of a move."""
    if sched.is_fixed(cmd):
        return True, None, None, None, None

    command = sched.commands[cmd]
    starts = sched.starts[samples, cmd]
    pstart = float(planned_sched.starts[0, cmd])
    return (
        False,
        (command.u, command.v),
        (float(np.min(starts)), float(np.max(starts))),
        (pstart, pstart + command.d),
        release,
    )


def _stay_side(sched, other, key, other_cmd, samples, planned_sched, planned_other):
    """Return (fixed, edge, window, planned, release) of the occupant.

    The hold covers the stay of the arriving agent at the vertex.
    """
    visit = sched.stay_visit(key)
    arrived = other.visit_arriving_by(other_cmd)
    arr = other.arrival(arrived)[samples]
    dep = other.departure(arrived)[samples]
    parr = float(planned_other.arrival(arrived)[0])
    pdep = float(planned_other.departure(arrived)[0])

    pinned = sched.pinned_until(visit)
    if pinned is not None:
        last = max(
            float(np.max(pinned[samples])),
            float(planned_sched.pinned_until(visit)[0]),
        )
        if min(float(np.min(arr)), parr) <= last + TIME_EPS:
            return True, None, None, None, None

    return (
        False,
        (visit.vertex, visit.vertex),
        (float(np.min(arr)), float(np.max(dep))),
        (parr, pdep),
        None,
    )


def _planned_release(planned_sched, key):
    return float(planned_sched.departure(planned_sched.stay_visit(key))[0])


def build_conflict(estimate, s_i, s_j, planned_i, planned_j, cmd_pair=None):
    """Make the Conflict of one command pair of an agent pair estimate.

    For a vertex conflict the occupant is the side that occupied the vertex
    in most of the selected samples, agent_j on a tie.

    Args:
        estimate (PairEstimate): Result for the agent pair.
        s_i, s_j (TimedSchedule): Realised schedules used for the estimate.
        planned_i, planned_j (TimedSchedule): Zero delay schedules.
        cmd_pair (tuple): Command pair; default is the most frequent pair.
    """
    if cmd_pair is None:
        best = estimate.max_pair()
        if best is None:
            return None
        cmd_pair = best[0]

    selected = np.all(estimate.sample_cmds == np.array(cmd_pair), axis=1)
    if not np.any(selected):
        return None
    cmd_i, cmd_j = (int(cmd) for cmd in cmd_pair)

    occ = estimate.sample_occupant[selected]
    nocc_i = int(np.count_nonzero(occ == _OCC_I))
    nocc_j = int(np.count_nonzero(occ == _OCC_J))
    if nocc_i == 0 and nocc_j == 0:
        kind = EDGE
        side_i = _move_side(s_i, cmd_i, selected, planned_i)
        side_j = _move_side(s_j, cmd_j, selected, planned_j)
    elif nocc_i > nocc_j:
        kind = VERTEX
        side_i = _stay_side(s_i, s_j, cmd_i, cmd_j, selected, planned_i, planned_j)
        side_j = _move_side(
            s_j, cmd_j, selected, planned_j, _planned_release(planned_i, cmd_i)
        )
    else:
        kind = VERTEX
        side_i = _move_side(
            s_i, cmd_i, selected, planned_i, _planned_release(planned_j, cmd_j)
        )
        side_j = _stay_side(s_j, s_i, cmd_j, cmd_i, selected, planned_j, planned_i)

    fixed_i, edge_i, window_i, plan_i, release_i = side_i
    fixed_j, edge_j, window_j, plan_j, release_j = side_j
    count = int(np.count_nonzero(selected))
    return Conflict(
        estimate.agent_i,
        estimate.agent_j,
        cmd_i,
        cmd_j,
        count / float(estimate.nsamples),
        fixed_i,
        fixed_j,
        float(np.mean(estimate.sample_time[selected])),
        kind,
        edge_i,
        edge_j,
        window_i,
        window_j,
        plan_i,
        plan_j,
        count,
        release_i,
        release_j,
    )


def pairwise_conflict_probability(
    path_i, path_j, start_times, models, n_samples, rng, zero_delay=False
):
    """Estimate the conflict probability of two paths.

    Args:
        path_i, path_j (Path): The paths.
        start_times (sequence): Start time of each path, or None to use
            the path start times.
        models: EdgeModels or dict of GammaParams by edge key.
        n_samples (int): Number of realisations, >= 1.
        rng (numpy.random.Generator): Random generator.
        zero_delay (bool): Check the planned timing only.

    Returns:
        dict with probability and counts per (cmd_i, cmd_j).
    """
    st_i, st_j = (None, None) if start_times is None else start_times
    s_i = realize_schedule(path_i, st_i, models, rng, n_samples, zero_delay)
    s_j = realize_schedule(path_j, st_j, models, rng, n_samples, zero_delay)
    est = _estimate_pair(s_i, s_j)
    return {"probability": est.probability, "counts": dict(est.counts)}


class ConflictReport:
    """All pair estimates of one solution, from one Monte-Carlo pass."""

    def __init__(self, estimates, schedules, planned):
        self._estimates = estimates
        self._schedules = schedules
        self._planned = planned

    @property
    def estimates(self):
        """Dict of PairEstimate keyed by (agent_i, agent_j), agent_i < agent_j."""
        return self._estimates

    @property
    def schedules(self):
        return self._schedules

    def p_max(self):
        """Return (P_max, (agent_i, cmd_i, agent_j, cmd_j) or None)."""
        best_p = 0.0
        best_at = None
        for key in sorted(self._estimates):
            found = self._estimates[key].max_pair()
            if found is not None and found[1] > best_p:
                best_p = found[1]
                best_at = (key[0], found[0][0], key[1], found[0][1])
        return best_p, best_at

    def conflict(self, agent_i, agent_j, cmd_pair=None):
        est = self._estimates[(agent_i, agent_j)]
        return build_conflict(
            est,
            self._schedules[agent_i],
            self._schedules[agent_j],
            self._planned[agent_i],
            self._planned[agent_j],
            cmd_pair,
        )

    def first_conflict(self, epsilon):
        """Earliest conflict among agent pairs with probability above epsilon.

        Agent pairs are ordered by the mean realised conflict time; the
        returned Conflict is the most frequent command pair of that pair.
        """
        above = [
            est for est in self._estimates.values() if est.probability > epsilon
        ]
        if not above:
            return None
        first = min(above, key=lambda est: (est.mean_time, est.agent_i, est.agent_j))
        return self.conflict(first.agent_i, first.agent_j)


class ConflictEstimator:
    """Estimate conflicts of solutions with learned delay models.

    Every agent draws from its own generator, seeded from (seed, agent), so
    the estimate of an agent pair does not depend on the other agents and the
    same path gets the same realisations at every constraint tree node.

    Args:
        models: EdgeModels or dict of GammaParams by edge key.
        n_samples (int): Number of realisations.
        seed (int): Seed of the per agent generators.
        zero_delay (bool): Use the planned timing only (one sample).
        graph (Graph, optional): Move durations from graph weights.
    """

    def __init__(
        self, models, n_samples=N_SAMPLES, seed=0, zero_delay=False, graph=None
    ):
        if n_samples < 1:
            raise ValueError("n_samples must be at least 1")
        self._models = models
        self._nsamples = 1 if zero_delay else int(n_samples)
        self._seed = int(seed) if seed is not None else 0
        self._zero_delay = zero_delay
        self._graph = graph

    def __repr__(self):
        return "{}(n_samples={}, seed={}, zero_delay={})".format(
            self.__class__.__name__, self._nsamples, self._seed, self._zero_delay
        )

    @property
    def n_samples(self):
        return self._nsamples

    @property
    def zero_delay(self):
        return self._zero_delay

    def _rng(self, agent):
        seq = np.random.SeedSequence(self._seed, spawn_key=(int(agent),))
        return np.random.default_rng(seq)

    def realize(self, path):
        """Realised TimedSchedule of one path."""
        return realize_schedule(
            path,
            None,
            self._models,
            self._rng(path.agent),
            self._nsamples,
            self._zero_delay,
            self._graph,
        )

    def planned(self, path):
        """Zero delay TimedSchedule of one path."""
        return realize_schedule(path, None, None, None, 1, True, self._graph)

    def evaluate(self, solution):
        """Estimate all agent pairs of a solution.

        Args:
            solution (list or dict): Path per agent.

        Returns:
            ConflictReport
        """
        paths = solution.values() if isinstance(solution, dict) else solution
        paths = sorted(paths, key=lambda pth: pth.agent)

        schedules = {pth.agent: self.realize(pth) for pth in paths}
        if self._zero_delay:
            planned = schedules
        else:
            planned = {pth.agent: self.planned(pth) for pth in paths}

        estimates = {}
        for num, path_i in enumerate(paths):
            verts_i = {visit.vertex for visit in schedules[path_i.agent].visits}
            for path_j in paths[num + 1 :]:
                verts_j = {visit.vertex for visit in schedules[path_j.agent].visits}
                if verts_i.isdisjoint(verts_j):
                    continue
                est = _estimate_pair(schedules[path_i.agent], schedules[path_j.agent])
                if est.probability > 0.0:
                    estimates[(path_i.agent, path_j.agent)] = est

        return ConflictReport(estimates, schedules, planned)


def max_conflict_probability(solution, start_times, models, n_samples, rng):
    """Return (P_max, argmax) of a solution, see :meth:`ConflictReport.p_max`.

    The generator seeds a :class:`ConflictEstimator`. ``start_times`` may
    override path start times (dict or list per agent), or be None.
    """
    solution = _with_start_times(solution, start_times)
    seed = int(rng.integers(0, 2 ** 62))
    return ConflictEstimator(models, n_samples, seed).evaluate(solution).p_max()


def first_conflict(solution, start_times, models, epsilon, n_samples, rng):
    """First conflict of a solution at threshold epsilon, or None."""
    if not 0.0 < epsilon < 1.0:
        raise ValueError("epsilon must be in (0, 1), got {}".format(epsilon))
    solution = _with_start_times(solution, start_times)
    seed = int(rng.integers(0, 2 ** 62))
    report = ConflictEstimator(models, n_samples, seed).evaluate(solution)
    return report.first_conflict(epsilon)


def _with_start_times(solution, start_times):
    paths = list(solution.values() if isinstance(solution, dict) else solution)
    if start_times is None:
        return paths
    result = []
    for num, pth in enumerate(paths):
        key = pth.agent if isinstance(start_times, dict) else num
        result.append(pth._replace(start_time=float(start_times[key])))
    return result
