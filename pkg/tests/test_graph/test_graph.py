# -*- coding: utf-8 -*-
"""Testing Graph construction and queries."""

import networkx as nx
import pytest

import stochmapf
from stochmapf.graph.graph import Edge, Vertex, edge_key

smapf = stochmapf.SMAPFDialog()
logger = smapf.basiclogger(__name__)


@pytest.fixture(name="square")
def fixture_square():
    """Unit square 0-1-2-3 with one diagonal 0-2."""
    coords = [(0, 0), (1, 0), (1, 1), (0, 1)]
    return stochmapf.build_graph(coords, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)])


def test_build_graph_euclidean_weights():
    grf = stochmapf.build_graph([(0, 0), (3, 4)], [(0, 1)])
    assert grf.weight(1, 0) == 5.0
    assert grf.weight(0, 1) == 5.0
    assert grf.euclidean
    assert grf.nvertices == 2
    assert grf.nedges == 1


def test_explicit_weights(square):
    grf = stochmapf.build_graph(
        [(0, 0), (1, 0), (2, 0)], [(0, 1), (1, 2)], weights=[2.0, 7.5]
    )
    assert grf.weight(2, 1) == 7.5
    assert not grf.euclidean

    grf = stochmapf.build_graph(
        [(0, 0), (1, 0), (2, 0)], [(0, 1), (1, 2)], weights={(1, 0): 3.0, (1, 2): 1.0}
    )
    assert grf.weight(0, 1) == 3.0
    assert square.euclidean


def test_duplicated_pairs_are_merged():
    grf = stochmapf.build_graph([(0, 0), (1, 0)], [(0, 1), (1, 0)])
    assert grf.nedges == 1
    assert grf.edges == [Edge(0, 1, 1.0)]


def test_invalid_edges():
    with pytest.raises(stochmapf.InvalidEdgeError):
        stochmapf.build_graph([(0, 0), (1, 0)], [(0, 0)])
    with pytest.raises(stochmapf.InvalidEdgeError):
        stochmapf.build_graph([(0, 0), (1, 0)], [(0, 5)])
    with pytest.raises(stochmapf.InvalidEdgeError):
        stochmapf.build_graph([(0, 0), (1, 0)], [(0, 1)], weights=[-1.0])
    with pytest.raises(stochmapf.InvalidEdgeError):
        stochmapf.build_graph([(0, 0), (1, 0)], [(0, 1)], weights=[0.0])
    with pytest.raises(ValueError):
        stochmapf.Graph([Vertex(0, 0, 0), Vertex(0, 1, 1)], [])


def test_disconnected_graph():
    with pytest.raises(stochmapf.DisconnectedGraphError):
        stochmapf.build_graph([(0, 0), (1, 0), (5, 5)], [(0, 1)])
    # the error is also a ValueError
    with pytest.raises(ValueError):
        stochmapf.build_graph([(0, 0), (1, 0), (5, 5)], [(0, 1)])


def test_weight_of_missing_edge(line3):
    with pytest.raises(stochmapf.InvalidEdgeError):
        line3.weight(0, 2)
    assert not line3.has_edge(0, 2)
    assert line3.has_edge(2, 1)


def test_neighbors_and_coordinates(square):
    assert [vid for vid, _ in square.neighbors(0)] == [1, 2, 3]
    assert square.coordinates(2) == (1.0, 1.0)
    assert square.distance(0, 2) == pytest.approx(2 ** 0.5)


def test_vertex_input_forms():
    grf = stochmapf.build_graph(
        [{"id": 5, "x": 0, "y": 0}, (6, 1.0, 0.0)], [(5, 6)]
    )
    assert grf.vertex_ids == [5, 6]
    with pytest.raises(ValueError):
        stochmapf.build_graph([(1, 2, 3, 4)], [])


def test_shortest_path_matches_networkx(square):
    nxg = square.to_networkx()
    for u in square.vertex_ids:
        for v in square.vertex_ids:
            expected = nx.dijkstra_path_length(nxg, u, v, weight="weight")
            assert square.shortest_path_length(u, v) == pytest.approx(expected)
    assert square.shortest_path(1, 3) in ([1, 0, 3], [1, 2, 3])
    assert nxg.nodes[2]["pos"] == (1.0, 1.0)


def test_edge_key():
    assert edge_key(3, 1) == (1, 3)
    assert edge_key(1, 3) == (1, 3)


def test_generate_hash(square):
    same = stochmapf.build_graph(
        [(0, 0), (1, 0), (1, 1), (0, 1)], [(0, 2), (3, 0), (2, 3), (1, 2), (0, 1)]
    )
    assert square.generate_hash() == same.generate_hash()
    other = stochmapf.build_graph(
        [(0, 0), (1, 0), (1, 1), (0, 1)], [(0, 1), (1, 2), (2, 3)]
    )
    assert square.generate_hash() != other.generate_hash()


def test_describe(square):
    text = square.describe(flush=False)
    assert "Number of vertices" in text
    assert "Euclidean weights" in text
