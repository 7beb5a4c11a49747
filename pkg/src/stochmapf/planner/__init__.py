# -*- coding: utf-8 -*-
"""The stochmapf planner package"""

# flake8: noqa
from stochmapf.planner.planner import (
    CONFLICT_FREE,
    NO_SOLUTION,
    TIMEOUT_BEST_EFFORT,
    Constraint,
    CTNode,
    FixedCommand,
    OnlineInstance,
    PlannerConfig,
    SearchResult,
    high_level_search,
    low_level_search,
    make_constraint,
    solution_cost,
    solution_from_file,
    solution_to_file,
)
