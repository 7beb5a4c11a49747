# -*- coding: utf-8 -*-
"""Module for stochmapf defined Exceptions.

Input and contract errors subclass the standard ValueError, while failures of
a numerical method or a search subclass RuntimeError. Hence they can also be
catched by the standard base class.

These exceptions will be present on top stochmapf level as e.g.::

  try:
      stochmapf.build_graph(vertices, edges)
  except stochmapf.DisconnectedGraphError:
      an_action

"""


class DisconnectedGraphError(ValueError):
    """Graph is not connected (ValueError)"""


class InvalidEdgeError(ValueError):
    """Edge is a self-loop or refers to an unknown vertex (ValueError)"""


class GenerationFailedError(RuntimeError):
    """No connected instance within the attempt budget (RuntimeError)"""


class NonPositiveObservationError(ValueError):
    """A delay observation is zero or negative (ValueError)"""


class NoConvergenceError(RuntimeError):
    """Root finding did not converge within the iteration cap (RuntimeError)"""


class DigammaDomainError(ValueError):
    """Digamma evaluated at a non-positive argument (ValueError)"""


class NoPathError(RuntimeError):
    """Goal unreachable under the given constraints and horizon (RuntimeError)"""


class NoSolutionError(RuntimeError):
    """The planner cannot build a root solution (RuntimeError)"""

    def __init__(self, message, agent=None, task_id=None):
        super().__init__(message)
        self.agent = agent
        self.task_id = task_id

    def __reduce__(self):
        return (self.__class__, (self.args[0], self.agent, self.task_id))


class FixedCommandConstraintError(ValueError):
    """A constraint was requested on a fixed command (ValueError)"""


class InvalidPlanError(ValueError):
    """Plan is not valid for the task (ValueError)"""


class InconsistentFixedCommandError(ValueError):
    """New plan head disagrees with the in-flight command (ValueError)"""


class InstanceFileError(OSError):
    """Instance, plan or results file is missing or malformed (OSError)"""


class SimulationStalledError(RuntimeError):
    """Simulation exceeded its event budget (RuntimeError)"""
