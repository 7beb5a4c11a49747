# -*- coding: utf-8 -*-
"""The experiment module: plan, simulate, learn and re-plan over a task list.

For every task an initial plan is searched within t_limit and executed in the
simulator. Each observed delay updates the learned models at once (parameter
update, PU). Every t_ci units of simulated time the simulator state is handed
to the solver and the plan is replaced if a conflict free solution comes back
within t_limit (online re-planning, OR). The learned models persist from task
to task.

Randomness is derived from the master seed of the config::

    per task simulation      derive_seed(seed, 1, task_index)
    per task Monte-Carlo     derive_seed(seed, 2, task_index)
    per re-plan Monte-Carlo  derive_seed(seed, 2, task_index, replan_index)

Example::

    >>> config = ExperimentConfig(mode="gstt", seed=7)
    >>> result = run_suite("map1.json", config, n_tasks=10)
    >>> result.aggregates()["mean_vertex_conflicts"]

"""

from collections import namedtuple
from dataclasses import asdict, dataclass

import pandas as pd

from stochmapf.common import SMAPFDialog, SMAPFDescription, SMAPFShowProgress
from stochmapf.common.calc import derive_seed
from stochmapf.common.constants import (
    C_PENALTY,
    EPSILON,
    MAX_SIM_EVENTS,
    MILESTONES,
    N_SAMPLES,
    PLANNER_MODES,
    PRIOR,
    T_CI,
    T_LIMIT,
    TIME_EPS,
)
from stochmapf.common.exceptions import NoSolutionError
from stochmapf.delay.delay_model import PriorConfig
from stochmapf.delay.edge_models import EdgeModels
from stochmapf.graph.instance import Instance, instance_from_file
from stochmapf.metadata.metadata import MetaDataRun
from stochmapf.planner.planner import CONFLICT_FREE, OnlineInstance, PlannerConfig
from stochmapf.simulator.simulator import SimConfig, Simulator
from stochmapf.experiment.learning import LearningReport, rmse_report
from stochmapf.experiment.solver import Solver
from stochmapf.experiment import _experiment_io

smapf = SMAPFDialog()
logger = smapf.functionlogger(__name__)


@dataclass(frozen=True)
class ExperimentConfig:
    """Settings of an experiment run; defaults are the reference settings.

    Args:
        mode: Planner mode, "cbs", "stt" or "gstt".
        use_or: Online re-planning every t_ci.
        use_pu: Update the delay models with observed delays.
        no_error: Models fixed at the true parameters (hypothetical baseline).
        epsilon: Conflict probability threshold.
        t_ci: Re-planning interval in simulated time.
        c_penalty: Operator penalty factor.
        t_limit: Wall clock limit per solver call in seconds.
        prior: Prior of the delay models.
        n_samples: Monte-Carlo samples per conflict estimate.
        seed: Master seed.
        zero_delay: Simulate without delays.
        literal_prior: Use the literal sign of the prior conversion.
        max_nodes: Optional cap on constraint tree nodes per solver call.
        max_events: Simulator event budget per task.
    """

    mode: str = "gstt"
    use_or: bool = True
    use_pu: bool = True
    no_error: bool = False
    epsilon: float = EPSILON
    t_ci: float = T_CI
    c_penalty: float = C_PENALTY
    t_limit: float = T_LIMIT
    prior: PriorConfig = PriorConfig(*PRIOR)
    n_samples: int = N_SAMPLES
    seed: int = 0
    zero_delay: bool = False
    literal_prior: bool = False
    max_nodes: int = None
    max_events: int = MAX_SIM_EVENTS

    def __post_init__(self):
        if self.mode not in PLANNER_MODES:
            raise ValueError("Unknown planner mode {}".format(self.mode))
        if not 0.0 < self.epsilon < 1.0:
            raise ValueError("epsilon must be in (0, 1)")
        if not self.t_ci > 0.0:
            raise ValueError("t_ci must be positive")
        if not self.t_limit > 0.0:
            raise ValueError("t_limit must be positive")
        if self.n_samples < 1:
            raise ValueError("n_samples must be positive")
        if self.seed is None or self.seed < 0:
            raise ValueError("seed must be a non-negative integer")
        if not isinstance(self.prior, PriorConfig):
            object.__setattr__(self, "prior", PriorConfig(*self.prior))

    def planner_config(self, seed=None):
        return PlannerConfig(
            mode=self.mode,
            epsilon=self.epsilon,
            n_samples=self.n_samples,
            seed=self.seed if seed is None else seed,
            max_nodes=self.max_nodes,
        )

    def sim_config(self, seed, record_trace=False):
        return SimConfig(
            c_penalty=self.c_penalty,
            seed=seed,
            zero_delay=self.zero_delay,
            max_events=self.max_events,
            record_trace=record_trace,
        )

    def as_dict(self):
        data = asdict(self)
        data["prior"] = list(self.prior)
        return data


class TaskMetrics(
    namedtuple(
        "TaskMetrics",
        "task_id vertex_conflicts edge_waits flowtime init_calc_time init_timeout "
        "replan_count total_online_calc_time init_status lower_bound n_agents",
    )
):
    """Outcome of one task; times are in seconds, flowtime in simulated time."""

    __slots__ = ()

    @property
    def init_calc_ms(self):
        return 1000.0 * self.init_calc_time

    @property
    def online_calc_ms(self):
        return 1000.0 * self.total_online_calc_time


def replan_policy(state, last_replan_time, t_ci):
    """True if at least t_ci simulated time has passed since the last re-plan.

    Args:
        state: Simulator, or the current clock as a number.
        last_replan_time (float): Clock of the previous re-plan (or 0).
        t_ci (float): Re-planning interval.
    """
    clock = getattr(state, "clock", state)
    return clock - last_replan_time >= t_ci


def _lower_bound(graph, task):
    return sum(
        graph.shortest_path_length(start, goal) for _, start, goal in task.agents()
    )


def run_task(graph, true_params, task, solver, config, task_index=0, trace_file=None):
    """Execute one task: initial plan, simulation, learning and re-planning.

    Args:
        graph (Graph): The map.
        true_params (dict): True GammaParams keyed by edge key.
        task (Task): Starts and goals.
        solver (Solver): Planner and learned models, updated in place.
        config (ExperimentConfig): Settings.
        task_index (int): Position of the task in the suite, for seeding.
        trace_file (str or Path): Optional event trace output.

    Returns:
        TaskMetrics

    Raises:
        NoSolutionError: No initial path for some agent.
    """
    instance = OnlineInstance.from_task(graph, task, config.t_limit)
    try:
        init = solver.find_solution(instance, derive_seed(config.seed, 2, task_index))
    except NoSolutionError as err:
        err.task_id = task.task_id
        raise

    sim = Simulator(
        graph,
        true_params,
        task,
        init.solution,
        config.sim_config(
            derive_seed(config.seed, 1, task_index), record_trace=trace_file is not None
        ),
    )

    last_replan = 0.0
    replans = 0
    online_time = 0.0
    while not sim.is_done():
        result = sim.step()
        for obs in result.observations:
            solver.update_parameter(obs)

        if not config.use_or or sim.is_done():
            continue
        if not replan_policy(sim, last_replan, config.t_ci):
            continue

        last_replan = sim.clock
        replans += 1
        seed = derive_seed(config.seed, 2, task_index, replans)
        try:
            answer = solver.find_solution(sim.to_online_instance(config.t_limit), seed)
        except NoSolutionError as err:
            logger.warning("Re-plan at t=%.3f failed, plan kept: %s", sim.clock, err)
            continue
        online_time += answer.calc_time
        if answer.status == CONFLICT_FREE:
            sim.apply_plan(answer.solution)
        else:
            logger.info("Re-plan at t=%.3f gave %s", sim.clock, answer.status)

    if trace_file is not None:
        sim.trace_to_file(trace_file)

    lbound = _lower_bound(graph, task)
    if sim.flowtime < lbound - TIME_EPS * max(1.0, lbound):
        logger.error("Flowtime %s below lower bound %s", sim.flowtime, lbound)

    metrics = TaskMetrics(
        task.task_id,
        sim.vertex_conflicts,
        sim.edge_waits,
        sim.flowtime,
        init.calc_time,
        init.timed_out,
        replans,
        online_time,
        init.status,
        lbound,
        task.nagents,
    )
    logger.info(
        "Task %s: %s vertex conflicts, %s edge waits, flowtime %.3f, %s re-plans",
        task.task_id,
        metrics.vertex_conflicts,
        metrics.edge_waits,
        metrics.flowtime,
        replans,
    )
    return metrics


def make_solver(instance, config):
    """The Solver a suite starts from: prior models, or the truth if no_error."""
    if config.no_error:
        models = EdgeModels.from_truth(instance.true_params, prior=config.prior)
    else:
        models = EdgeModels(
            instance.graph, prior=config.prior, literal=config.literal_prior
        )
    learn = config.use_pu and not config.no_error
    return Solver(instance.graph, models, config.planner_config(), learn=learn)


def run_suite(instance_file, config, n_tasks=None, progress=False, solver=None):
    """Run tasks in sequence with models persisting from task to task.

    Args:
        instance_file (str, Path or Instance): The instance.
        config (ExperimentConfig): Settings.
        n_tasks (int): Number of tasks from the start of the list, default all.
        progress (bool): Show progress on stdout.
        solver (Solver): Start from this solver state instead of the prior.

    Returns:
        SuiteResult
    """
    if isinstance(instance_file, Instance):
        instance = instance_file
        source = "in-memory"
    else:
        instance = instance_from_file(instance_file)
        source = str(instance_file)

    n_tasks = instance.ntasks if n_tasks is None else int(n_tasks)
    if n_tasks < 0 or n_tasks > instance.ntasks:
        raise ValueError(
            "Instance has {} tasks, {} requested".format(instance.ntasks, n_tasks)
        )

    solver = solver if solver is not None else make_solver(instance, config)
    learning = LearningReport(MILESTONES)
    rows = []

    prog = SMAPFShowProgress(n_tasks, show=progress, leadtext="Tasks ")
    for index, task in enumerate(instance.tasks[:n_tasks]):
        prog.flush(index)
        metrics = run_task(
            instance.graph, instance.true_params, task, solver, config, index
        )
        entry = rmse_report(solver, instance.true_params, prior=config.prior)
        learning.add(entry, metrics.vertex_conflicts, metrics.flowtime)
        rows.append((metrics, entry.rmse_a, entry.rmse_b))
    prog.finished()
    learning.finalize()

    meta = MetaDataRun()
    meta.required = config
    meta.opt.md5sum = instance.generate_hash()
    meta.opt.source = source
    meta.freeform = {"n_tasks": n_tasks, "n_agents": instance.nagents}
    return SuiteResult(config, rows, learning, meta, solver)


class SuiteResult:
    """Per task metrics, aggregates and learning report of a suite."""

    def __init__(self, config, rows, learning, metadata, solver=None):
        self._config = config
        self._rows = rows
        self._learning = learning
        self._metadata = metadata
        self._solver = solver

    def __repr__(self):
        return "{}(mode={}, ntasks={})".format(
            self.__class__.__name__, self._config.mode, len(self._rows)
        )

    @property
    def config(self):
        return self._config

    @property
    def metrics(self):
        """List of TaskMetrics."""
        return [row[0] for row in self._rows]

    @property
    def learning(self):
        """The LearningReport."""
        return self._learning

    @property
    def metadata(self):
        return self._metadata

    @property
    def solver(self):
        """Solver state after the last task."""
        return self._solver

    @property
    def ntasks(self):
        return len(self._rows)

    def dataframe(self):
        """Results table, one row per task."""
        cfg = self._config
        records = []
        for met, rmse_a, rmse_b in self._rows:
            records.append(
                {
                    "task_id": met.task_id,
                    "mode": cfg.mode,
                    "use_or": cfg.use_or,
                    "use_pu": cfg.use_pu,
                    "t_ci": cfg.t_ci,
                    "vertex_conflicts": met.vertex_conflicts,
                    "edge_waits": met.edge_waits,
                    "flowtime": met.flowtime,
                    "init_calc_ms": met.init_calc_ms,
                    "init_timeout": met.init_timeout,
                    "replans": met.replan_count,
                    "online_calc_ms": met.online_calc_ms,
                    "rmse_a": rmse_a,
                    "rmse_b": rmse_b,
                    "init_status": met.init_status,
                    "no_error": cfg.no_error,
                    "n_agents": met.n_agents,
                    "seed": cfg.seed,
                }
            )
        return pd.DataFrame.from_records(records, columns=_experiment_io.COLUMNS)

    def aggregates(self):
        """Suite means as a dict."""
        return aggregate(self.dataframe())

    def describe(self, flush=True):
        """Describe the suite result by printing to stdout."""
        agg = self.aggregates()
        dsc = SMAPFDescription()
        dsc.title("Description of {} instance".format(self.__class__.__name__))
        dsc.txt("Object ID", id(self))
        cfg = self._config
        dsc.txt("Mode, OR, PU", cfg.mode, cfg.use_or, cfg.use_pu)
        dsc.txt("Number of tasks", agg["n_tasks"])
        dsc.txt("Mean vertex conflicts", agg["mean_vertex_conflicts"])
        dsc.txt("Mean edge waits", agg["mean_edge_waits"])
        dsc.txt("Mean flowtime", agg["mean_flowtime"])
        dsc.txt("Mean initial calc ms", agg["mean_init_calc_ms"])
        dsc.txt("Timeout rate", agg["timeout_rate"])
        if self._learning.ntasks:
            learn = self._learning
            dsc.txt("Final RMSE a, b", learn.rmse_a[-1], learn.rmse_b[-1])

        if flush:
            dsc.flush()
            return None

        return dsc.astext()

    def to_files(self, outdir, stem="results"):
        """Write <stem>.csv and <stem>.json into outdir; return both paths."""
        return _experiment_io.export_suite(self, outdir, stem)


def aggregate(dfr):
    """Means over tasks of a results table."""
    ntasks = len(dfr)
    if ntasks == 0:
        return {
            "n_tasks": 0,
            "mean_vertex_conflicts": float("nan"),
            "mean_edge_waits": float("nan"),
            "mean_flowtime": float("nan"),
            "mean_init_calc_ms": float("nan"),
            "timeout_rate": float("nan"),
            "mean_online_calc_ms": float("nan"),
            "mean_replans": float("nan"),
        }
    replans = int(dfr["replans"].sum())
    return {
        "n_tasks": ntasks,
        "mean_vertex_conflicts": float(dfr["vertex_conflicts"].mean()),
        "mean_edge_waits": float(dfr["edge_waits"].mean()),
        "mean_flowtime": float(dfr["flowtime"].mean()),
        "mean_init_calc_ms": float(dfr["init_calc_ms"].mean()),
        "timeout_rate": float(dfr["init_timeout"].astype(bool).sum()) / ntasks,
        "mean_online_calc_ms": (
            float(dfr["online_calc_ms"].sum()) / replans if replans else 0.0
        ),
        "mean_replans": float(dfr["replans"].mean()),
    }
