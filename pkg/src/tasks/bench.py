import logging
from pathlib import Path

from celery_app import celery_app
from src.commands.common import prepare, run_synthesis, status_for
from src.enums import Objective, RunStatus, Scenario, SolverKind
from src.exceptions import StateCapExceeded, SynthesisError
from src.regret import cooperation_payoffs
from src.schema import BenchRecord, InstanceRef, RunConfig
from src.solvers import layers_identical

logger = logging.getLogger(__name__)


@celery_app.task(name="src.tasks.bench.run_bench_instance", bind=True)
def run_bench_instance(
    self,
    instance: str,
    scenario: str,
    num_locations: int,
    num_objects: int,
    instance_seed: int,
    solver: str,
    objective: str = Objective.MINMAX.value,
    budget_factor: float | None = None,
    seed: int = 0,
    max_states: int | None = None,
    max_vars: int | None = None,
) -> dict:
    """
    Run one (instance, solver, objective) record of a sweep.
    Failures become records; nothing is raised back to the dispatcher.
    """
    config = RunConfig(
        source=InstanceRef(instance=instance),
        solver=SolverKind(solver),
        objective=Objective(objective),
        seed=seed,
        max_states=max_states,
        max_vars=max_vars,
    )
    axes = {
        "scenario": Scenario(scenario),
        "num_locations": num_locations,
        "num_objects": num_objects,
        "instance_seed": instance_seed,
        "budget_factor": budget_factor,
    }
    logger.info(f"[{self.request.id}] {Path(instance).stem} via {config.solver.value} ({config.objective.value})")
    try:
        prepared = prepare(config.source, None, max_states)
        outcome = run_synthesis(config, prepared, budget_factor=budget_factor)
        record = BenchRecord(**outcome.report.model_dump(), **axes)
        if config.solver == SolverKind.SYMBOLIC_PARTITIONED:
            record.layers_identical = layers_identical(prepared.game, prepared.dfa, max_vars=max_vars)
        if config.solver == SolverKind.EXPLICIT and outcome.regret is not None and outcome.regret.feasible:
            record.cooperation = cooperation_payoffs(outcome.minmax, outcome.regret)
    except StateCapExceeded as e:
        record = BenchRecord(
            instance=Path(instance).stem,
            formula="",
            solver=config.solver,
            objective=config.objective,
            seed=seed,
            status=RunStatus.SKIPPED,
            message=e.message,
            sizes={"count_estimate": e.count_estimate},
            **axes,
        )
    except SynthesisError as e:
        logger.error(f"{Path(instance).stem} via {config.solver.value} failed: {e.message}")
        record = BenchRecord(
            instance=Path(instance).stem,
            formula="",
            solver=config.solver,
            objective=config.objective,
            seed=seed,
            status=status_for(e),
            message=e.message,
            **axes,
        )
    return record.model_dump(mode="json")
