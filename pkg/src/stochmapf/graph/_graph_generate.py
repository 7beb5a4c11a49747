# -*- coding: utf-8 -*-
"""Private module, random maps, true delay parameters and tasks.

Every draw goes through one ``numpy.random.Generator`` in a fixed order, so a
seed fully determines the result.
"""

import numpy as np
import networkx as nx
from scipy.spatial import distance

from stochmapf.common import SMAPFDialog
from stochmapf.common.constants import (
    COORD_MAX,
    DEGREE_MAX,
    DEGREE_MIN,
    MAX_GENERATION_ATTEMPTS,
    MEAN_VALUES,
    VARIANCE_VALUES,
)
from stochmapf.common.exceptions import GenerationFailedError
from stochmapf.delay.delay_model import moments_to_params
from stochmapf.graph.graph import Vertex, Edge, Graph, edge_key
from stochmapf.graph.path import Task

smapf = SMAPFDialog()
logger = smapf.functionlogger(__name__)


def _nearest_edges(coords, degrees):
    """Edge keys from each vertex to its degree nearest vertices.

    Ties in distance are broken by the lower vertex id.
    """
    nvert = coords.shape[0]
    dist = distance.cdist(coords, coords)
    ids = np.arange(nvert)

    keys = set()
    for vid in range(nvert):
        order = np.lexsort((ids, dist[vid]))
        order = order[order != vid]
        for other in order[: min(int(degrees[vid]), nvert - 1)]:
            keys.add(edge_key(vid, int(other)))
    return sorted(keys)


def generate_graph(rng, n_vertices, max_attempts=MAX_GENERATION_ATTEMPTS):
    """Random geometric graph, regenerated from scratch until connected.

    Args:
        rng (numpy.random.Generator): Random generator.
        n_vertices (int): Number of vertices, >= 2.
        max_attempts (int): Number of attempts before giving up.

    Returns:
        (Graph, number of attempts used)

    Raises:
        GenerationFailedError: No connected graph within max_attempts.
    """
    for attempt in range(1, max_attempts + 1):
        coords = rng.integers(0, COORD_MAX + 1, size=(n_vertices, 2))
        degrees = rng.integers(DEGREE_MIN, DEGREE_MAX + 1, size=n_vertices)

        if len(np.unique(coords, axis=0)) < n_vertices:
            logger.debug("Attempt %s: duplicated coordinates", attempt)
            continue

        keys = _nearest_edges(coords.astype(np.float64), degrees)

        nxg = nx.Graph()
        nxg.add_nodes_from(range(n_vertices))
        nxg.add_edges_from(keys)
        if not nx.is_connected(nxg):
            logger.debug("Attempt %s: graph not connected", attempt)
            continue

        vertices = [Vertex(vid, x, y) for vid, (x, y) in enumerate(coords.tolist())]
        edges = []
        for u, v in keys:
            wgt = float(np.hypot(*(coords[u] - coords[v])))
            edges.append(Edge(u, v, wgt))

        logger.info("Connected graph after %s attempt(s)", attempt)
        return Graph(vertices, edges), attempt

    raise GenerationFailedError(
        "No connected graph with {} vertices after {} attempts".format(
            n_vertices, max_attempts
        )
    )


def generate_true_params(rng, graph, literal=False):
    """Draw the true delay mean and variance per edge, map them to GammaParams.

    The mean is uniform on {3, ..., 9} and the variance uniform on
    {0.1, ..., 0.4}. Edges are visited in sorted key order.
    """
    mode = "literal" if literal else "moment"
    logger.info("Map true delay moments to gamma parameters with %s mapping", mode)

    result = {}
    for edge in graph.edges:
        mean = float(rng.integers(MEAN_VALUES[0], MEAN_VALUES[-1] + 1))
        variance = rng.integers(1, len(VARIANCE_VALUES) + 1) / 10.0
        result[(edge.u, edge.v)] = moments_to_params(mean, variance, literal=literal)
    return result


def _draw_distinct(rng, vertex_ids, count, exclude=None):
    chosen = []
    used = set()
    for num in range(count):
        while True:
            vid = vertex_ids[int(rng.integers(0, len(vertex_ids)))]
            if vid in used:
                continue
            if exclude is not None and exclude[num] == vid:
                continue
            break
        used.add(vid)
        chosen.append(vid)
    return chosen


def generate_tasks(graph, n_agents, n_tasks, rng, first_id=0):
    """Random tasks by rejection sampling over the vertex set.

    Starts are pairwise distinct, goals are pairwise distinct and no agent
    has its goal at its own start.

    Args:
        graph (Graph): The map.
        n_agents (int): Agents per task, at most half the vertex count.
        n_tasks (int): Number of tasks.
        rng (numpy.random.Generator): Random generator.
        first_id (int): Task id of the first task.

    Returns:
        List of Task.
    """
    if n_agents < 1:
        raise ValueError("Need at least one agent per task")
    if 2 * n_agents > graph.nvertices:
        raise ValueError(
            "Too many agents ({}) for {} vertices".format(n_agents, graph.nvertices)
        )
    if n_tasks < 0:
        raise ValueError("Number of tasks cannot be negative")

    vertex_ids = graph.vertex_ids
    tasks = []
    for num in range(n_tasks):
        starts = _draw_distinct(rng, vertex_ids, n_agents)
        goals = _draw_distinct(rng, vertex_ids, n_agents, exclude=starts)
        tasks.append(Task(first_id + num, starts, goals))
    return tasks
