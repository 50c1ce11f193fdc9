"""`synth`: one min-max or regret synthesis run."""

import argparse
import logging

from src.commands.common import (
    REPORT_FILE,
    add_limit_arguments,
    add_source_arguments,
    failure_report,
    run_synthesis,
    source_from_args,
    write_outcome,
)
from src.enums import Objective, RunStatus, SolverKind
from src.exceptions import InfeasibleError, SynthesisError
from src.schema import RunConfig
from src.utils.reporting import append_jsonl, ensure_dir

logger = logging.getLogger(__name__)


def add_parser(subparsers) -> None:
    parser = subparsers.add_parser("synth", help="Synthesise a min-max or regret strategy")
    add_source_arguments(parser)
    parser.add_argument("--solver", type=SolverKind, default=SolverKind.SYMBOLIC_MONOLITHIC, choices=list(SolverKind))
    parser.add_argument("--objective", type=Objective, default=Objective.MINMAX, choices=list(Objective))
    parser.add_argument("--budget", type=int, default=None, help="Regret budget (default: ceil(1.25 x min-max))")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--out", default="out", help="Output directory")
    add_limit_arguments(parser)
    parser.set_defaults(func=run)


def config_from_args(args: argparse.Namespace) -> RunConfig:
    return RunConfig(
        source=source_from_args(args),
        formula=args.formula,
        solver=args.solver,
        objective=args.objective,
        budget=args.budget,
        seed=args.seed,
        out=args.out,
        max_states=args.max_states,
        max_vars=args.max_vars,
    )


def cmd_synth(config: RunConfig):
    try:
        outcome = run_synthesis(config)
    except SynthesisError as e:
        append_jsonl(ensure_dir(config.out) / REPORT_FILE, [failure_report(config, e)])
        raise
    write_outcome(outcome, config.out)
    return outcome


def run(args: argparse.Namespace) -> int:
    config = config_from_args(args)
    outcome = cmd_synth(config)
    report = outcome.report
    if report.status == RunStatus.INFEASIBLE:
        raise InfeasibleError(report.message or "Task is infeasible.")
    logger.info(f"Wrote strategy and report to {config.out}")
    return 0
