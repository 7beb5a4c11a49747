# -*- coding: utf-8 -*-
# flake8: noqa
"""The stochmapf simulator package: discrete event plan execution"""


from stochmapf.simulator.simulator import (
    DelayObservation,
    SimConfig,
    SimEvent,
    Simulator,
    StepResult,
    apply_plan,
    init_sim,
    is_done,
    run,
    step,
    to_online_instance,
)
from stochmapf.simulator._sim_trace import import_jsonl as trace_from_file
