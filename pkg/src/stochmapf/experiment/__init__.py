# -*- coding: utf-8 -*-
# flake8: noqa
"""The stochmapf experiment package: suites, learning reports and tables"""


from stochmapf.experiment.solver import Solver
from stochmapf.experiment.learning import (
    LearningEntry,
    LearningReport,
    milestones,
    rmse_report,
)
from stochmapf.experiment.experiment import (
    ExperimentConfig,
    SuiteResult,
    TaskMetrics,
    aggregate,
    make_solver,
    replan_policy,
    run_suite,
    run_task,
)
from stochmapf.experiment.report import difficulty_table, summary_table
from stochmapf.experiment._experiment_io import (
    import_aggregate as aggregate_from_file,
    import_csv as results_from_file,
)
