"""
`bench`: sweep generated two-region instances over one scenario axis and
record one result per (instance, solver).
"""

import argparse
import logging
from collections import defaultdict
from pathlib import Path
from typing import Sequence

from tqdm import tqdm

from src.domain import gen_benchmark
from src.enums import Objective, RunStatus, Scenario, SolverKind
from src.exceptions import CrossSolverMismatch
from src.schema import BenchRecord
from src.tasks.bench import run_bench_instance
from src.utils.reporting import append_jsonl, ensure_dir, write_csv

logger = logging.getLogger(__name__)

BENCH_JSONL = "bench.jsonl"
BENCH_CSV = "bench.csv"
DEFAULT_FACTORS = (1.0, 1.25, 1.5, 2.0)


def int_range(text: str) -> list[int]:
    """'3:7' is 3..7 inclusive; '3,5,9' is a list."""
    if ":" in text:
        lo, hi = text.split(":", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(x) for x in text.split(",") if x]


def float_list(text: str) -> list[float]:
    return [float(x) for x in text.split(",") if x]


def add_parser(subparsers) -> None:
    parser = subparsers.add_parser("bench", help="Benchmark sweep over generated instances")
    parser.add_argument("--scenario", type=Scenario, required=True, choices=list(Scenario))
    parser.add_argument("--range", dest="values", default=None, help="Swept |L| or |O| values, e.g. 3:7")
    parser.add_argument("--locations", type=int, default=5, help="|L| when not swept")
    parser.add_argument("--objects", type=int, default=3, help="|O| when not swept")
    parser.add_argument(
        "--factors",
        type=float_list,
        default=list(DEFAULT_FACTORS),
        help="Budget multipliers of the min-max value for vary-B",
    )
    parser.add_argument(
        "--solvers",
        default=",".join(s.value for s in SolverKind),
        help="Comma-separated solvers",
    )
    parser.add_argument("--objective", type=Objective, default=None, choices=list(Objective))
    parser.add_argument("--seeds", type=int, default=1, help="Instances per point")
    parser.add_argument("--seed", type=int, default=0, help="First instance seed")
    parser.add_argument("--out", default="out", help="Output directory")
    parser.add_argument("--max-states", type=int, default=None)
    parser.add_argument("--max-vars", type=int, default=None)
    parser.set_defaults(func=run)


def sweep_points(
    scenario: Scenario, values: list[int] | None, locations: int, objects: int, factors: Sequence[float]
) -> list[tuple[int, int, float | None]]:
    """(|L|, |O|, budget factor) per point of the axis."""
    if scenario == Scenario.VARY_L:
        return [(n, objects, None) for n in values or range(3, 8)]
    if scenario == Scenario.VARY_O:
        return [(locations, n, None) for n in values or range(1, 4)]
    return [(locations, objects, f) for f in factors]


def check_agreement(records: list[BenchRecord]) -> list[str]:
    """Mark records whose solvers disagree on one instance; returns the offending instances."""
    groups: dict[tuple, list[BenchRecord]] = defaultdict(list)
    for record in records:
        if record.status in (RunStatus.OK, RunStatus.INFEASIBLE):
            groups[(record.instance, record.objective, record.budget_factor)].append(record)
    bad = []
    for (instance, _, _), group in groups.items():
        outcomes = {(r.value, r.regret, r.feasible) for r in group}
        if len(outcomes) > 1 or any(r.layers_identical is False for r in group):
            bad.append(instance)
            for r in group:
                r.status = RunStatus.MISMATCH
                r.message = f"Solvers disagree: {sorted(outcomes, key=str)}"
    return bad


def cmd_bench(
    scenario: Scenario,
    values: list[int] | None,
    solvers: list[SolverKind],
    seeds: int,
    out: str,
    locations: int = 5,
    objects: int = 3,
    factors: Sequence[float] = DEFAULT_FACTORS,
    objective: Objective | None = None,
    first_seed: int = 0,
    max_states: int | None = None,
    max_vars: int | None = None,
) -> list[BenchRecord]:
    scenario = Scenario(scenario)
    if objective is None:
        objective = Objective.REGRET if scenario == Scenario.VARY_B else Objective.MINMAX
    out_dir = ensure_dir(out)
    instance_dir = ensure_dir(out_dir / "instances")

    jobs = []
    for num_l, num_o, factor in sweep_points(scenario, values, locations, objects, factors):
        for instance_seed in range(first_seed, first_seed + seeds):
            inst = gen_benchmark(num_l, num_o, seed=instance_seed)
            path = instance_dir / f"{inst.name}.json"
            path.write_text(inst.to_json(), encoding="utf-8")
            for solver in solvers:
                jobs.append(
                    dict(
                        instance=str(path),
                        scenario=scenario.value,
                        num_locations=num_l,
                        num_objects=num_o,
                        instance_seed=instance_seed,
                        solver=SolverKind(solver).value,
                        objective=objective.value,
                        budget_factor=factor,
                        seed=instance_seed,
                        max_states=max_states,
                        max_vars=max_vars,
                    )
                )

    logger.info(f"Dispatching {len(jobs)} {scenario.value} records")
    pending = [run_bench_instance.apply_async(kwargs=job) for job in jobs]
    records = [BenchRecord.model_validate(result.get()) for result in tqdm(pending, desc=scenario.value, unit="run")]

    bad = check_agreement(records)
    append_jsonl(out_dir / BENCH_JSONL, records)
    write_csv(out_dir / BENCH_CSV, records)
    if bad:
        raise CrossSolverMismatch(f"Solvers disagree on {sorted(set(bad))}")
    return records


def run(args: argparse.Namespace) -> int:
    cmd_bench(
        args.scenario,
        int_range(args.values) if args.values else None,
        [SolverKind(s) for s in args.solvers.split(",") if s],
        args.seeds,
        args.out,
        locations=args.locations,
        objects=args.objects,
        factors=args.factors,
        objective=args.objective,
        first_seed=args.seed,
        max_states=args.max_states,
        max_vars=args.max_vars,
    )
    logger.info(f"Results in {Path(args.out) / BENCH_JSONL}")
    return 0
