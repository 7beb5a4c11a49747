# -*- coding: utf-8 -*-
"""Command line interface: stochmapf generate | run | sweep | report.

Exit codes::

    0  success
    2  invalid flags or preconditions (also an empty sweep grid)
    3  map generation failed (no connected map within the attempts)
    4  unreadable or missing instance, results or map file
    5  no initial solution for a task; the message names the task id

Examples::

    stochmapf generate --seed 7 --vertices 50 --agents 10 --tasks 100 --out maps
    stochmapf run --map maps/instance.json --seed 1 --mode gstt --or --pu --out res
    stochmapf sweep --map maps/instance.json --seed 1 --t-ci 10,25,50,75 --out sw
    stochmapf report res/*.csv --aggregate res/*.json --map maps/instance.json

``STOCHMAPF_THREADS`` caps the worker processes of a sweep (default 1).
"""

import argparse
import itertools
import os
import pathlib
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace

import pandas as pd

from stochmapf.common import SMAPFDialog
from stochmapf.common.calc import derive_seed
from stochmapf.common.constants import (
    C_PENALTY,
    EPSILON,
    N_SAMPLES,
    PLANNER_MODES,
    PRIOR,
    T_CI,
    T_LIMIT,
)
from stochmapf.common.exceptions import (
    GenerationFailedError,
    InstanceFileError,
    NoSolutionError,
)
from stochmapf.delay.delay_model import PriorConfig
from stochmapf.experiment import _experiment_io, report
from stochmapf.experiment.experiment import ExperimentConfig, aggregate, run_suite
from stochmapf.graph.instance import (
    generate_instance,
    generate_tasks,
    graph_from_file,
    instance_from_file,
)
from stochmapf.metadata.metadata import MetaDataRun

smapf = SMAPFDialog()
logger = smapf.functionlogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_GENERATION = 3
EXIT_INPUT = 4
EXIT_NO_SOLUTION = 5


# ======================================================================================
# Flag parsing
# ======================================================================================


def _int_list(text):
    try:
        return [int(item) for item in text.split(",") if item.strip()]
    except ValueError as err:
        raise argparse.ArgumentTypeError("Bad integer list " + text) from err


def _float_list(text):
    try:
        return [float(item) for item in text.split(",") if item.strip()]
    except ValueError as err:
        raise argparse.ArgumentTypeError("Bad number list " + text) from err


def _mode_list(text):
    modes = [item.strip() for item in text.split(",") if item.strip()]
    for mode in modes:
        if mode not in PLANNER_MODES:
            raise argparse.ArgumentTypeError("Unknown mode {}".format(mode))
    return modes


def _prior(text):
    try:
        return PriorConfig(*[float(item) for item in text.split(",")])
    except (TypeError, ValueError) as err:
        raise argparse.ArgumentTypeError(
            "Prior must be four positive numbers a,b,r,s: {}".format(err)
        ) from err


def _add_run_flags(parser, sweep=False):
    parser.add_argument("--map", required=True, help="Instance file")
    parser.add_argument("--seed", type=int, required=True, help="Master seed")
    if sweep:
        parser.add_argument(
            "--mode", type=_mode_list, default=["gstt"], help="Modes, e.g. stt,gstt"
        )
        parser.add_argument(
            "--t-ci", type=_float_list, default=[T_CI], help="Intervals, e.g. 10,25"
        )
        parser.add_argument(
            "--agents", type=_int_list, default=None, help="Regenerate tasks per count"
        )
        parser.add_argument(
            "--both-or", action="store_true", help="Sweep with and without re-planning"
        )
        parser.add_argument(
            "--both-pu", action="store_true", help="Sweep with and without learning"
        )
    else:
        parser.add_argument("--mode", choices=PLANNER_MODES, default="gstt")
        parser.add_argument("--t-ci", type=float, default=T_CI, help="Re-plan interval")
        parser.add_argument("--stem", default=None, help="Output file stem")

    parser.add_argument(
        "--or", dest="use_or", action=argparse.BooleanOptionalAction, default=False,
        help="Online re-planning",
    )
    parser.add_argument(
        "--pu", dest="use_pu", action=argparse.BooleanOptionalAction, default=False,
        help="Parameter update from observed delays",
    )
    parser.add_argument(
        "--no-error", action="store_true", help="Models fixed at the true parameters"
    )
    parser.add_argument("--epsilon", type=float, default=EPSILON)
    parser.add_argument("--penalty", type=float, default=C_PENALTY)
    parser.add_argument("--t-limit-ms", type=int, default=int(T_LIMIT * 1000))
    parser.add_argument("--mc-samples", type=int, default=N_SAMPLES)
    parser.add_argument("--prior", type=_prior, default=PriorConfig(*PRIOR))
    parser.add_argument("--literal-prior", action="store_true")
    parser.add_argument("--zero-delay", action="store_true")
    parser.add_argument("--max-nodes", type=int, default=None)
    parser.add_argument("--tasks", type=int, default=None, help="Run the first N tasks")
    parser.add_argument("--out", default=".", help="Output folder")


def build_parser():
    """Return the argument parser."""
    parser = argparse.ArgumentParser(
        prog="stochmapf",
        description="Online MAPF with stochastic delays: generate, run, sweep, report",
    )
    parser.add_argument("--verbose", action="store_true", help="Log at INFO level")
    parser.add_argument(
        "--version", action="version", version=SMAPFDialog.get_smapf_info()
    )
    subs = parser.add_subparsers(dest="command", required=True)

    gen = subs.add_parser("generate", help="Generate a random instance file")
    gen.add_argument("--seed", type=int, required=True)
    gen.add_argument("--vertices", type=int, required=True)
    gen.add_argument("--agents", type=int, required=True)
    gen.add_argument("--tasks", type=int, default=100)
    gen.add_argument("--literal-delays", action="store_true")
    gen.add_argument("--name", default="instance", help="Instance file stem")
    gen.add_argument("--out", default=".", help="Output folder")
    gen.set_defaults(func=cmd_generate)

    run = subs.add_parser("run", help="Run a suite of tasks")
    _add_run_flags(run)
    run.set_defaults(func=cmd_run)

    sweep = subs.add_parser("sweep", help="Run suites over a parameter grid")
    _add_run_flags(sweep, sweep=True)
    sweep.set_defaults(func=cmd_sweep)

    rep = subs.add_parser("report", help="Tables and plot-ready CSV from results")
    rep.add_argument("results", nargs="+", help="Results CSV files")
    rep.add_argument("--aggregate", nargs="*", default=[], help="Aggregate JSON files")
    rep.add_argument("--map", default=None, help="Instance file for edge midpoints")
    rep.add_argument("--out", default=".", help="Output folder")
    rep.set_defaults(func=cmd_report)

    return parser


def config_from_args(args, mode=None, t_ci=None, use_or=None, use_pu=None):
    """ExperimentConfig from parsed flags, with optional grid overrides."""
    return ExperimentConfig(
        mode=args.mode if mode is None else mode,
        use_or=args.use_or if use_or is None else use_or,
        use_pu=args.use_pu if use_pu is None else use_pu,
        no_error=args.no_error,
        epsilon=args.epsilon,
        t_ci=args.t_ci if t_ci is None else t_ci,
        c_penalty=args.penalty,
        t_limit=args.t_limit_ms / 1000.0,
        prior=args.prior,
        n_samples=args.mc_samples,
        seed=args.seed,
        zero_delay=args.zero_delay,
        literal_prior=args.literal_prior,
        max_nodes=args.max_nodes,
    )


def default_stem(config):
    """Results file stem naming the configuration, e.g. gstt_or_pu_tci100."""
    stem = config.mode
    stem += "_or" if config.use_or else ""
    stem += "_pu" if config.use_pu else ""
    stem += "_noerror" if config.no_error else ""
    return "{}_tci{:g}".format(stem, config.t_ci)


# ======================================================================================
# Subcommands
# ======================================================================================


def cmd_generate(args):
    """Generate an instance file."""
    inst = generate_instance(
        args.seed, args.vertices, args.agents, args.tasks, literal=args.literal_delays
    )
    path = pathlib.Path(args.out) / (args.name + ".json")
    inst.to_file(path)
    print(
        "Wrote {}: {} vertices, {} edges, {} tasks of {} agents, connected after "
        "{} attempt(s)".format(
            path,
            inst.graph.nvertices,
            inst.graph.nedges,
            inst.ntasks,
            inst.nagents,
            inst.attempts,
        )
    )
    return EXIT_OK


def cmd_run(args):
    """Run one suite and write results CSV and aggregate JSON."""
    config = config_from_args(args)
    result = run_suite(args.map, config, n_tasks=args.tasks, progress=args.verbose)
    stem = args.stem if args.stem else default_stem(config)
    csvfile, jsonfile = result.to_files(args.out, stem)
    agg = result.aggregates()
    print(
        "Wrote {} and {}: {} tasks, mean conflicts {:.3f}, mean flowtime {:.3f}".format(
            csvfile,
            jsonfile,
            agg["n_tasks"],
            agg["mean_vertex_conflicts"],
            agg["mean_flowtime"],
        )
    )
    return EXIT_OK


def sweep_cells(args):
    """Grid cells as sorted dicts; the index keys the cell seed."""
    or_values = [False, True] if args.both_or else [args.use_or]
    pu_values = [False, True] if args.both_pu else [args.use_pu]
    agents = args.agents if args.agents is not None else [None]
    grid = itertools.product(
        sorted(set(args.mode)),
        sorted(set(args.t_ci)),
        agents,
        or_values,
        pu_values,
    )
    cells = []
    for mode, t_ci, n_agents, use_or, use_pu in grid:
        cells.append(
            {
                "mode": mode,
                "t_ci": t_ci,
                "n_agents": n_agents,
                "use_or": use_or,
                "use_pu": use_pu,
            }
        )
    return cells


def _run_cell(mapfile, cell, config, n_tasks, master_seed):
    """Run one grid cell; top level so it can be sent to a worker process."""
    inst = instance_from_file(mapfile)
    if cell["n_agents"] is not None:
        count = inst.ntasks if n_tasks is None else n_tasks
        seed = derive_seed(master_seed, 4, cell["n_agents"])
        tasks = generate_tasks(inst.graph, cell["n_agents"], count, seed)
        inst = inst.with_tasks(tasks)
    try:
        result = run_suite(inst, config, n_tasks=n_tasks)
    except NoSolutionError as err:
        raise NoSolutionError(
            "{} (task {}, cell {})".format(err, err.task_id, cell),
            agent=err.agent,
            task_id=err.task_id,
        ) from err
    return result.dataframe(), result.aggregates()


def _threads():
    try:
        return max(1, int(os.environ.get("STOCHMAPF_THREADS", "1")))
    except ValueError:
        logger.warning("STOCHMAPF_THREADS is not an integer, using 1")
        return 1


def cmd_sweep(args):
    """Run the cartesian product of the listed values; one CSV, one JSON."""
    if not args.mode or not args.t_ci or (args.agents is not None and not args.agents):
        raise ValueError("Empty sweep grid")

    # fail early on an unreadable map
    instance_from_file(args.map)

    cells = sweep_cells(args)
    jobs = []
    for index, cell in enumerate(cells):
        config = config_from_args(
            args,
            mode=cell["mode"],
            t_ci=cell["t_ci"],
            use_or=cell["use_or"],
            use_pu=cell["use_pu"],
        )
        config = replace(config, seed=derive_seed(args.seed, 3, index))
        jobs.append((args.map, cell, config, args.tasks, args.seed))

    nthreads = min(_threads(), len(jobs))
    logger.info("Sweep of %s cells on %s process(es)", len(jobs), nthreads)
    if nthreads > 1:
        with ProcessPoolExecutor(max_workers=nthreads) as pool:
            futures = [pool.submit(_run_cell, *job) for job in jobs]
            outcomes = [future.result() for future in futures]
    else:
        outcomes = [_run_cell(*job) for job in jobs]

    frames = []
    cellaggs = []
    for (_, cell, config, _, _), (dfr, agg) in zip(jobs, outcomes):
        frames.append(dfr)
        cellaggs.append({**cell, "seed": config.seed, **agg})

    sortkeys = ["mode", "t_ci", "n_agents", "use_or", "use_pu", "task_id"]
    table = pd.concat(frames, ignore_index=True)
    table = table.sort_values(sortkeys, kind="mergesort").reset_index(drop=True)

    outdir = pathlib.Path(args.out)
    _experiment_io.export_csv(table, outdir / "sweep.csv")

    meta = MetaDataRun()
    meta.required = config_from_args(args, mode=cells[0]["mode"], t_ci=cells[0]["t_ci"])
    meta.opt.source = str(args.map)
    meta.opt.md5sum = instance_from_file(args.map).generate_hash()
    meta.freeform = {"cells": len(cells)}
    _experiment_io.export_aggregate(
        meta.get_metadata(),
        aggregate(table),
        {"cells": cellaggs},
        outdir / "sweep.json",
    )
    print("Wrote {} rows over {} cells to {}".format(len(table), len(cells), outdir))
    return EXIT_OK


def cmd_report(args):
    """Write summary, difficulty, learning, histogram and error ratio tables."""
    graph = graph_from_file(args.map) if args.map else None
    written = report.write_report(args.results, args.out, args.aggregate, graph)

    summary = report.summary_table(report.read_results(args.results))
    with pd.option_context("display.width", 120, "display.max_columns", 20):
        print(summary.to_string(index=False))
    print("Wrote {}".format(", ".join(str(path) for path in written)))
    return EXIT_OK


# ======================================================================================
# Entry point
# ======================================================================================


def main(argv=None):
    """Console entry point, return the exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as err:
        return EXIT_OK if err.code in (0, None) else EXIT_USAGE

    if args.verbose:
        smapf.basiclogger("stochmapf", logginglevel="INFO")

    try:
        return args.func(args)
    except NoSolutionError as err:
        print("No solution for task {}: {}".format(err.task_id, err), file=sys.stderr)
        return EXIT_NO_SOLUTION
    except GenerationFailedError as err:
        print("Generation failed: {}".format(err), file=sys.stderr)
        return EXIT_GENERATION
    except InstanceFileError as err:
        print("Input error: {}".format(err), file=sys.stderr)
        return EXIT_INPUT
    except ValueError as err:
        print("Invalid input: {}".format(err), file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
