# -*- coding: utf-8 -*-
# flake8: noqa
"""The stochmapf conflict package: Monte-Carlo conflict estimation"""


from stochmapf.conflict.conflict_estimator import (
    FIXED,
    ORIGIN,
    Conflict,
    PairEstimate,
    TimedSchedule,
    ConflictReport,
    ConflictEstimator,
    realize_schedule,
    schedules_conflict,
    pairwise_conflict_probability,
    max_conflict_probability,
    first_conflict,
)
