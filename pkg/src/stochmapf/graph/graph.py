# -*- coding: utf-8 -*-
"""The graph module, with the Graph class (weighted bidirectional graph).

A Graph holds vertices with planar coordinates and undirected edges with a
positive travel weight. Both directions of every edge are traversable with
the same weight. Edge related values elsewhere in stochmapf (delay models,
observations) are keyed by the unordered pair, see :func:`edge_key`.

Example::

    >>> import stochmapf
    >>> grf = stochmapf.build_graph([(0, 0), (3, 4)], [(0, 1)])
    >>> grf.weight(1, 0)
    5.0

"""

from collections import namedtuple

import networkx as nx

from stochmapf.common import SMAPFDialog, SMAPFDescription
from stochmapf.common.calc import vectorlength2
from stochmapf.common.sys import generic_hash
from stochmapf.common.exceptions import DisconnectedGraphError, InvalidEdgeError

smapf = SMAPFDialog()
logger = smapf.functionlogger(__name__)

_WEIGHT_RTOL = 1.0e-9


def edge_key(u, v):
    """Return the unordered key (min, max) of the edge between u and v."""
    return (u, v) if u <= v else (v, u)


class Vertex(namedtuple("Vertex", "id x y")):
    """A vertex with integer id and planar coordinates."""

    __slots__ = ()

    def __new__(cls, id, x, y):  # pylint: disable=redefined-builtin
        return super().__new__(cls, int(id), float(x), float(y))


class Edge(namedtuple("Edge", "u v weight")):
    """A directed view (u, v) of a graph edge with its travel weight."""

    __slots__ = ()

    def __new__(cls, u, v, weight):
        if u == v:
            raise InvalidEdgeError("Self-loop at vertex {}".format(u))
        weight = float(weight)
        if not weight > 0.0:
            raise InvalidEdgeError(
                "Edge ({}, {}) must have positive weight, got {}".format(u, v, weight)
            )
        return super().__new__(cls, int(u), int(v), weight)


class Graph:
    """Class for a connected, weighted and bidirectional graph.

    Prefer :func:`build_graph` for construction from plain coordinates and
    pairs; the constructor expects validated Vertex and Edge objects.

    Args:
        vertices (list): List of Vertex.
        edges (list): List of Edge, one per unordered pair.

    Raises:
        InvalidEdgeError: Unknown endpoint or duplicated pair.
        DisconnectedGraphError: Some vertex is not reachable from the others.
    """

    def __init__(self, vertices, edges):
        self._vertices = {}
        for vtx in vertices:
            if vtx.id in self._vertices:
                raise ValueError("Vertex id {} is not unique".format(vtx.id))
            self._vertices[vtx.id] = vtx

        if not self._vertices:
            raise ValueError("A graph needs at least one vertex")

        self._adjacency = {vid: {} for vid in self._vertices}
        for edge in edges:
            for vid in (edge.u, edge.v):
                if vid not in self._vertices:
                    raise InvalidEdgeError(
                        "Edge ({}, {}) refers to unknown vertex {}".format(
                            edge.u, edge.v, vid
                        )
                    )
            if edge.v in self._adjacency[edge.u]:
                raise InvalidEdgeError(
                    "Duplicated edge ({}, {})".format(edge.u, edge.v)
                )
            self._adjacency[edge.u][edge.v] = edge.weight
            self._adjacency[edge.v][edge.u] = edge.weight

        self._nxg = nx.Graph()
        self._nxg.add_nodes_from(sorted(self._vertices))
        self._nxg.add_weighted_edges_from(
            (edge.u, edge.v, edge.weight) for edge in self.edges
        )

        if not nx.is_connected(self._nxg):
            ncomp = nx.number_connected_components(self._nxg)
            raise DisconnectedGraphError(
                "Graph is not connected ({} components)".format(ncomp)
            )

        self._distcache = {}
        self._euclidean = all(
            abs(edge.weight - self.distance(edge.u, edge.v))
            <= _WEIGHT_RTOL * max(1.0, edge.weight)
            for edge in self.edges
        )
        logger.debug(
            "Graph with %s vertices and %s edges", self.nvertices, self.nedges
        )

    def __repr__(self):
        return "{}(nvertices={}, nedges={})".format(
            self.__class__.__name__, self.nvertices, self.nedges
        )

    # ==================================================================================
    # Properties
    # ==================================================================================

    @property
    def vertices(self):
        """List of Vertex sorted by id (read only)."""
        return [self._vertices[vid] for vid in sorted(self._vertices)]

    @property
    def vertex_ids(self):
        """Sorted list of vertex ids (read only)."""
        return sorted(self._vertices)

    @property
    def nvertices(self):
        """Number of vertices (read only)."""
        return len(self._vertices)

    @property
    def edges(self):
        """List of Edge, once per unordered pair with u < v (read only)."""
        result = []
        for uid in sorted(self._adjacency):
            for vid in sorted(self._adjacency[uid]):
                if uid < vid:
                    result.append(Edge(uid, vid, self._adjacency[uid][vid]))
        return result

    @property
    def nedges(self):
        """Number of undirected edges (read only)."""
        return sum(len(nbs) for nbs in self._adjacency.values()) // 2

    @property
    def euclidean(self):
        """True if every weight equals the Euclidean length of its edge."""
        return self._euclidean

    # ==================================================================================
    # Queries
    # ==================================================================================

    def has_vertex(self, vid):
        return vid in self._vertices

    def has_edge(self, u, v):
        """Return True if (u, v) is an edge (either direction)."""
        return u in self._adjacency and v in self._adjacency[u]

    def weight(self, u, v):
        """Return the travel weight of edge (u, v).

        Raises:
            InvalidEdgeError: If (u, v) is not an edge.
        """
        try:
            return self._adjacency[u][v]
        except KeyError as err:
            raise InvalidEdgeError("No edge ({}, {}) in graph".format(u, v)) from err

    def neighbors(self, u):
        """Return list of (v, weight) for all edges leaving u, sorted by v."""
        return sorted(self._adjacency[u].items())

    def coordinates(self, vid):
        vtx = self._vertices[vid]
        return vtx.x, vtx.y

    def distance(self, u, v):
        """Euclidean distance between the coordinates of u and v."""
        vtx1 = self._vertices[u]
        vtx2 = self._vertices[v]
        return vectorlength2(vtx1.x, vtx1.y, vtx2.x, vtx2.y)

    def distances_to(self, goal):
        """Return dict of shortest travel weight from every vertex to goal.

        Results are cached per goal.
        """
        if goal not in self._distcache:
            self._distcache[goal] = nx.single_source_dijkstra_path_length(
                self._nxg, goal, weight="weight"
            )
        return self._distcache[goal]

    def shortest_path_length(self, u, v):
        """Shortest travel weight from u to v (unconstrained, no delays)."""
        return self.distances_to(v)[u]

    def shortest_path(self, u, v):
        """Vertex sequence of a shortest path from u to v."""
        return nx.dijkstra_path(self._nxg, u, v, weight="weight")

    def to_networkx(self):
        """Return a copy as networkx.Graph with 'weight' and 'pos' attributes."""
        nxg = self._nxg.copy()
        for vtx in self._vertices.values():
            nxg.nodes[vtx.id]["pos"] = (vtx.x, vtx.y)
        return nxg

    def generate_hash(self, hashmethod="md5"):
        """Return a unique hash ID for the topology, coordinates and weights."""
        gid = ""
        for vtx in self.vertices:
            gid += "{}:{}:{};".format(vtx.id, vtx.x, vtx.y)
        for edge in self.edges:
            gid += "{}-{}:{!r};".format(edge.u, edge.v, edge.weight)
        return generic_hash(gid, hashmethod=hashmethod)

    def describe(self, flush=True):
        """Describe an instance by printing to stdout."""
        dsc = SMAPFDescription()
        dsc.title("Description of {} instance".format(self.__class__.__name__))
        dsc.txt("Object ID", id(self))
        dsc.txt("Number of vertices", self.nvertices)
        dsc.txt("Number of edges", self.nedges)
        weights = [edge.weight for edge in self.edges]
        if weights:
            dsc.txt(
                "Weights min, mean, max",
                "{:.3f}".format(min(weights)),
                "{:.3f}".format(sum(weights) / len(weights)),
                "{:.3f}".format(max(weights)),
            )
        dsc.txt("Euclidean weights", self.euclidean)

        if flush:
            dsc.flush()
            return None

        return dsc.astext()


def _as_vertex(index, item):
    if isinstance(item, Vertex):
        return item
    if isinstance(item, dict):
        return Vertex(item.get("id", index), item["x"], item["y"])
    item = tuple(item)
    if len(item) == 2:
        return Vertex(index, item[0], item[1])
    if len(item) == 3:
        return Vertex(*item)
    raise ValueError("Cannot interpret vertex {}".format(item))


def build_graph(vertices, edge_pairs, weights=None):
    """Build a Graph from coordinates and vertex pairs.

    Both directions of each pair are materialised. Duplicated pairs, also in
    opposite direction, are merged (first weight wins).

    Args:
        vertices (list): Vertex objects, (x, y) tuples (id = position),
            (id, x, y) tuples or dicts with keys id, x, y.
        edge_pairs (list): (u, v) vertex id pairs.
        weights (list or dict, optional): Explicit weights, either aligned with
            edge_pairs or as a dict keyed by (u, v). Default is the Euclidean
            distance between the endpoints.

    Returns:
        Graph

    Raises:
        InvalidEdgeError: Self-loop, unknown vertex or non-positive weight.
        DisconnectedGraphError: The result is not connected.
    """
    vtxlist = [_as_vertex(num, item) for num, item in enumerate(vertices)]
    known = {vtx.id: vtx for vtx in vtxlist}

    edges = {}
    for num, pair in enumerate(edge_pairs):
        u, v = (int(pair[0]), int(pair[1]))
        if u == v:
            raise InvalidEdgeError("Self-loop at vertex {}".format(u))
        for vid in (u, v):
            if vid not in known:
                raise InvalidEdgeError(
                    "Edge ({}, {}) refers to unknown vertex {}".format(u, v, vid)
                )
        key = edge_key(u, v)
        if key in edges:
            logger.debug("Skip duplicated edge %s", key)
            continue

        if weights is None:
            wgt = vectorlength2(known[u].x, known[u].y, known[v].x, known[v].y)
        elif isinstance(weights, dict):
            wgt = weights[(u, v)] if (u, v) in weights else weights[(v, u)]
        else:
            wgt = weights[num]

        edges[key] = Edge(key[0], key[1], wgt)

    return Graph(vtxlist, [edges[key] for key in sorted(edges)])
