# -*- coding: utf-8 -*-
# flake8: noqa
"""The stochmapf graph package: maps, paths, tasks and instances"""


# order matters; instance needs the delay package, which needs graph.graph
from stochmapf.graph.graph import Vertex, Edge, Graph, build_graph, edge_key
from stochmapf.graph.path import Command, Path, Task, validate_path
from stochmapf.graph.instance import (
    Instance,
    generate_instance,
    generate_tasks,
    graph_from_file,
    instance_from_file,
)
