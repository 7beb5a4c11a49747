# -*- coding: utf-8 -*-
"""Module for basic stochmapf constants"""

EULER_GAMMA = 0.57721566490153286061

# tolerance when comparing planned times
TIME_EPS = 1.0e-9

# minimum width of a constraint interval
MIN_CONSTRAINT_WIDTH = 1.0e-6

# experiment defaults
EPSILON = 0.01
T_CI = 100.0
C_PENALTY = 1.0
T_LIMIT = 10.0
PRIOR = (1.0, 0.2, 0.1, 0.1)
N_SAMPLES = 1000

# instance generation
COORD_MAX = 99
DEGREE_MIN = 2
DEGREE_MAX = 4
MEAN_VALUES = (3, 4, 5, 6, 7, 8, 9)
VARIANCE_VALUES = (0.1, 0.2, 0.3, 0.4)
MAX_GENERATION_ATTEMPTS = 1000

# root finding
NEWTON_MAXITER = 200
MAP_TOLERANCE = 1.0e-10
DIGAMMA_SHIFT = 6.0

# learning report milestones (task counts)
MILESTONES = (10, 100, 1000)

# low level search horizon, as factor of the unconstrained lower bound
HORIZON_FACTOR = 4.0

# planner modes
PLANNER_MODES = ("cbs", "stt", "gstt")

# simulator event budget per task
MAX_SIM_EVENTS = 1000000
