# -*- coding: utf-8 -*-
"""The instance module, with the Instance class (map, true delays and tasks).

An Instance is what the ``generate`` command writes and what experiment runs
read: a graph, the true gamma parameters of every edge (ground truth of the
simulator, never seen by the planner) and a list of tasks.

Example::

    >>> import stochmapf
    >>> inst = stochmapf.generate_instance(7, 50, 10, 100)
    >>> inst.to_file("map1.json")
    >>> same = stochmapf.instance_from_file("map1.json")

"""

import numpy as np

from stochmapf.common import SMAPFDialog, SMAPFDescription
from stochmapf.common.constants import MAX_GENERATION_ATTEMPTS
from stochmapf.common.sys import generic_hash
from stochmapf.graph.graph import edge_key
from stochmapf.graph import _graph_generate
from stochmapf.graph import _instance_io

smapf = SMAPFDialog()
logger = smapf.functionlogger(__name__)


def instance_from_file(wfile):
    """Make an Instance from an instance file (JSON).

    Raises:
        InstanceFileError: Missing, unreadable or malformed file.
    """
    return Instance(**_instance_io.import_json(wfile))


def graph_from_file(wfile):
    """Read only the Graph of an instance file."""
    return _instance_io.import_graph(wfile)


def generate_instance(
    seed,
    n_vertices,
    n_agents,
    n_tasks,
    literal=False,
    max_attempts=MAX_GENERATION_ATTEMPTS,
):
    """Generate a random instance, fully determined by the seed.

    Vertices get integer coordinates uniform on 0..99 and a degree uniform on
    2..4, edges link each vertex with its degree nearest vertices. The map is
    regenerated from scratch until connected. True delay parameters come from
    a mean uniform on {3..9} and variance uniform on {0.1..0.4} per edge.

    Args:
        seed (int): Random seed.
        n_vertices (int): Number of vertices, >= 2.
        n_agents (int): Agents per task, <= n_vertices / 2.
        n_tasks (int): Number of tasks.
        literal (bool): Use the literal shape mapping, see
            :func:`~stochmapf.delay.delay_model.moments_to_params`.
        max_attempts (int): Connectivity attempts before giving up.

    Returns:
        Instance

    Raises:
        ValueError: Preconditions violated.
        GenerationFailedError: No connected map within max_attempts.
    """
    if n_vertices < 2:
        raise ValueError("Need at least 2 vertices, got {}".format(n_vertices))
    if n_agents < 1 or 2 * n_agents > n_vertices:
        raise ValueError(
            "Number of agents must be in 1..{}, got {}".format(
                n_vertices // 2, n_agents
            )
        )
    if max_attempts < 1:
        raise ValueError("max_attempts must be positive")

    rng = np.random.default_rng(seed)
    grf, attempts = _graph_generate.generate_graph(rng, n_vertices, max_attempts)
    true_params = _graph_generate.generate_true_params(rng, grf, literal=literal)
    tasks = _graph_generate.generate_tasks(grf, n_agents, n_tasks, rng)

    inst = Instance(
        grf,
        true_params,
        tasks,
        seed=seed,
        delay_mapping="literal" if literal else "moment",
    )
    inst.attempts = attempts
    return inst


def generate_tasks(graph, n_agents, n_tasks, rng, first_id=0):
    """Random tasks on a graph with distinct starts and distinct goals.

    Args:
        graph (Graph): The map.
        n_agents (int): Agents per task.
        n_tasks (int): Number of tasks.
        rng (numpy.random.Generator or int): Generator, or a seed.
        first_id (int): Id of the first task.
    """
    if not isinstance(rng, np.random.Generator):
        rng = np.random.default_rng(rng)
    return _graph_generate.generate_tasks(graph, n_agents, n_tasks, rng, first_id)


class Instance:
    """Class for an experiment instance: graph, true delay parameters and tasks.

    Args:
        graph (Graph): The map.
        true_params (dict): GammaParams keyed by edge key (u, v), u < v.
        tasks (list): List of Task.
        seed (int): Seed the instance was generated from, if any.
        delay_mapping (str): "moment" or "literal".
    """

    def __init__(self, graph, true_params, tasks, seed=None, delay_mapping="moment"):
        self._graph = graph
        self._true_params = {edge_key(*key): val for key, val in true_params.items()}
        self._tasks = list(tasks)
        self._seed = seed
        self._delay_mapping = delay_mapping
        self.attempts = None

        for key in self._true_params:
            if not graph.has_edge(*key):
                raise ValueError("Delay parameters for unknown edge {}".format(key))
        for task in self._tasks:
            for vid in task.starts + task.goals:
                if not graph.has_vertex(vid):
                    raise ValueError(
                        "Task {} refers to unknown vertex {}".format(task.task_id, vid)
                    )

    def __repr__(self):
        return "{}(nvertices={}, nedges={}, ntasks={}, seed={})".format(
            self.__class__.__name__,
            self._graph.nvertices,
            self._graph.nedges,
            self.ntasks,
            self._seed,
        )

    @property
    def graph(self):
        """The Graph (read only)."""
        return self._graph

    @property
    def true_params(self):
        """Dict of true GammaParams per edge key (read only)."""
        return self._true_params

    @property
    def tasks(self):
        """List of Task (read only)."""
        return self._tasks

    @property
    def ntasks(self):
        return len(self._tasks)

    @property
    def nagents(self):
        """Agents in the first task, or 0 if no tasks."""
        return self._tasks[0].nagents if self._tasks else 0

    @property
    def seed(self):
        return self._seed

    @property
    def delay_mapping(self):
        return self._delay_mapping

    def with_tasks(self, tasks):
        """Return a new Instance on the same map with other tasks."""
        new = Instance(
            self._graph,
            self._true_params,
            tasks,
            seed=self._seed,
            delay_mapping=self._delay_mapping,
        )
        new.attempts = self.attempts
        return new

    def generate_hash(self, hashmethod="md5"):
        """Return a unique hash ID for map, truth and tasks."""
        gid = self._graph.generate_hash(hashmethod=hashmethod)
        for key in sorted(self._true_params):
            gid += "{}-{}:{!r}:{!r};".format(*key, *self._true_params[key])
        for task in self._tasks:
            gid += "{}:{}:{};".format(task.task_id, task.starts, task.goals)
        return generic_hash(gid, hashmethod=hashmethod)

    def describe(self, flush=True):
        """Describe an instance by printing to stdout."""
        dsc = SMAPFDescription()
        dsc.title("Description of {} instance".format(self.__class__.__name__))
        dsc.txt("Object ID", id(self))
        dsc.txt("Seed", self._seed)
        dsc.txt("Number of vertices", self._graph.nvertices)
        dsc.txt("Number of edges", self._graph.nedges)
        dsc.txt("Number of tasks", self.ntasks)
        dsc.txt("Agents per task", self.nagents)
        dsc.txt("Delay mapping", self._delay_mapping)
        if self.attempts is not None:
            dsc.txt("Connectivity attempts", self.attempts)

        if flush:
            dsc.flush()
            return None

        return dsc.astext()

    def to_file(self, wfile):
        """Export the instance to an instance file (JSON).

        Args:
            wfile (str or Path): Output file name; "$md5sum" in the name is
                replaced by :meth:`generate_hash`.
        """
        _instance_io.export_json(self, wfile)
