"""
Plumbing shared by the sub-commands: instance sources, formulas, one full
synthesis run and its artifacts.
"""

import argparse
import logging
import time
from dataclasses import dataclass
from pathlib import Path

from pydantic import ValidationError

from src.ddlib.export import write_dot
from src.ddlib.terminals import INFINITY, Value, is_finite
from src.domain import StripsTask, build_game, goal_formula, load_json, load_pddl
from src.domain.game import Game
from src.enums import Objective, Player, RunStatus, SolverKind
from src.exceptions import SchemaViolationError, StrategyMismatchError, SynthesisError
from src.ltlf import Dfa, parse, to_dfa
from src.regret import RegretResult, solve_regret, solve_regret_explicit
from src.schema import InstanceRef, RunConfig, RunReport, StrategyArtifact, StrategyEntry
from src.solvers import Arena, MinmaxResult, build_product, solve_minmax
from src.utils.budget import resolve_budget
from src.utils.reporting import append_jsonl, describe_phases, digest, ensure_dir, write_model

logger = logging.getLogger(__name__)

REPORT_FILE = "report.jsonl"
STRATEGY_FILE = "strategy.json"
STRATEGY_DOT_FILE = "strategy.dot"


# ----------------------
# Arguments
# ----------------------
def add_source_arguments(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("instance")
    group.add_argument("--instance", help="JSON instance file")
    group.add_argument("--pddl-domain", help="PDDL domain file")
    group.add_argument("--pddl-problem", help="PDDL problem file")
    group.add_argument("--caps", help="JSON sidecar naming the human action schemas and robot costs")
    group.add_argument("--formula", help="LTLf formula text or a file holding it (default: F of the goal)")


def add_limit_arguments(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--max-states", type=int, default=None, help="Explicit game and product state cap")
    parser.add_argument("--max-vars", type=int, default=None, help="Decision-diagram variable cap")


def source_from_args(args: argparse.Namespace) -> InstanceRef:
    try:
        return InstanceRef(
            instance=args.instance,
            pddl_domain=args.pddl_domain,
            pddl_problem=args.pddl_problem,
            caps=args.caps,
        )
    except ValidationError as e:
        raise SchemaViolationError(e.errors()[0]["msg"])


# ----------------------
# Loading
# ----------------------
@dataclass
class Prepared:
    ref: InstanceRef
    task: StripsTask
    game: Game
    formula: str
    dfa: Dfa

    @property
    def digest(self) -> str:
        return task_digest(self.task, self.formula)


def load_task(ref: InstanceRef) -> StripsTask:
    if ref.instance is not None:
        return load_json(ref.instance).to_strips()
    return load_pddl(ref.pddl_domain, ref.pddl_problem, ref.caps)


def read_formula(text: str | None, task: StripsTask | None) -> str:
    if text is None:
        return goal_formula(task)
    path = Path(text)
    if path.suffix in {".ltlf", ".txt"} and path.is_file():
        return path.read_text(encoding="utf-8").strip()
    return text


def task_digest(task: StripsTask, formula: str) -> str:
    return digest(
        task.name,
        ",".join(sorted(task.init)),
        ",".join(task.robot_action_names()),
        ",".join(task.human_action_names()),
        formula,
    )


def prepare(ref: InstanceRef, formula: str | None, max_states: int | None = None) -> Prepared:
    started = time.perf_counter()
    task = load_task(ref)
    text = read_formula(formula, task)
    dfa = to_dfa(parse(text, propositions=task.propositions))
    game = build_game(task, max_states=max_states)
    logger.info(f"Prepared '{task.name}' with {text!r} in {time.perf_counter() - started:.3f}s")
    return Prepared(ref=ref, task=task, game=game, formula=text, dfa=dfa)


# ----------------------
# One run
# ----------------------
@dataclass
class RunOutcome:
    prepared: Prepared
    report: RunReport
    minmax: MinmaxResult | None = None
    regret: RegretResult | None = None
    artifact: StrategyArtifact | None = None


def finite_or_none(value: Value) -> int | None:
    return int(value) if is_finite(value) else None


def _entry_order(entry: StrategyEntry) -> tuple:
    return (
        entry.state,
        entry.dfa_state,
        -1 if entry.utility is None else entry.utility,
        -1 if entry.best_alt is None else entry.best_alt,
    )


def minmax_entries(prepared: Prepared, result: MinmaxResult) -> list[StrategyEntry]:
    names = prepared.task.robot_action_names()
    entries = [
        StrategyEntry(state=prepared.game.state_text(v), dfa_state=z, action=names[a])
        for (v, z), a in result.strategy.items()
    ]
    return sorted(entries, key=_entry_order)


def regret_entries(prepared: Prepared, result: RegretResult) -> list[StrategyEntry]:
    names = prepared.task.robot_action_names()
    entries = [
        StrategyEntry(
            state=prepared.game.state_text(v),
            dfa_state=z,
            utility=u,
            best_alt=finite_or_none(b),
            action=names[a],
        )
        for (v, z, u, b), a in result.strategy.items()
    ]
    return sorted(entries, key=_entry_order)


def run_synthesis(
    config: RunConfig, prepared: Prepared | None = None, budget_factor: float | None = None
) -> RunOutcome:
    """Min-max solve, then (for the regret objective) budget resolution and the regret pipeline."""
    started = time.perf_counter()
    prepared = prepared or prepare(config.source, config.formula, config.max_states)
    phases = {"prepare": time.perf_counter() - started}
    report = RunReport(
        instance=prepared.task.name,
        formula=prepared.formula,
        solver=config.solver,
        objective=config.objective,
        budget=config.budget,
        seed=config.seed,
    )
    outcome = RunOutcome(prepared=prepared, report=report)

    minmax = solve_minmax(
        prepared.game,
        prepared.dfa,
        solver=config.solver,
        max_states=config.max_states,
        max_vars=config.max_vars,
    )
    outcome.minmax = minmax
    phases.update({f"minmax.{k}": v for k, v in minmax.phase_seconds.items()})
    report.value = finite_or_none(minmax.value)
    report.feasible = minmax.feasible
    report.iterations["minmax"] = minmax.iterations
    report.sizes.update(
        {
            "game_states": len(prepared.game.vertices),
            "dfa_states": prepared.dfa.num_states,
            "robot_product_states": minmax.stats.get("robot_states", 0),
        }
    )
    if "vars" in minmax.stats:
        report.var_counts = dict(minmax.stats["vars"])
    if "peak_nodes" in minmax.stats:
        report.peak_nodes = minmax.stats["peak_nodes"]

    artifact_entries: list[StrategyEntry] = []
    if config.objective == Objective.MINMAX:
        if minmax.feasible:
            artifact_entries = minmax_entries(prepared, minmax)
    elif minmax.feasible:
        budget, auto = resolve_budget(config.budget, minmax.value, budget_factor)
        report.budget, report.budget_auto = budget, auto
        regret = solve_regret(
            prepared.game,
            prepared.dfa,
            budget,
            solver=config.solver,
            max_states=config.max_states,
            max_vars=config.max_vars,
        )
        outcome.regret = regret
        phases.update({f"regret.{k}": v for k, v in regret.stats.get("phase_seconds", {}).items()})
        report.feasible = regret.feasible
        report.regret = finite_or_none(regret.regret)
        report.iterations["regret"] = regret.stats.get("regret_rounds", 0)
        report.sizes["utility_pairs"] = regret.stats.get("reachable_pairs", 0)
        report.sizes["ba_values"] = regret.stats.get("ba_values", 0)
        if "vars" in regret.stats:
            report.var_counts = dict(regret.stats["vars"])
        if "peak_nodes" in regret.stats:
            report.peak_nodes = max(report.peak_nodes or 0, regret.stats["peak_nodes"])
        if regret.feasible:
            artifact_entries = regret_entries(prepared, regret)

    report.phase_seconds = phases
    if not report.feasible:
        report.status = RunStatus.INFEASIBLE
        report.message = "No strategy completes the task" + (
            f" within budget {report.budget}" if report.budget is not None else ""
        )
    else:
        outcome.artifact = StrategyArtifact(
            source=prepared.ref,
            formula=prepared.formula,
            objective=config.objective,
            solver=config.solver,
            budget=report.budget if config.objective == Objective.REGRET else None,
            digest=prepared.digest,
            value=report.value,
            regret=report.regret,
            entries=artifact_entries,
        )
    logger.info(
        f"{config.objective.value} via {SolverKind(config.solver).value}: status {report.status.value}, "
        f"value {report.value}, regret {report.regret}; {describe_phases(phases)}"
    )
    return outcome


def write_outcome(outcome: RunOutcome, out: str | Path) -> Path:
    """report.jsonl (appended), strategy.json and, for symbolic runs, strategy.dot."""
    out_dir = ensure_dir(out)
    append_jsonl(out_dir / REPORT_FILE, [outcome.report])
    if outcome.artifact is not None:
        write_model(out_dir / STRATEGY_FILE, outcome.artifact)
        diagram = None
        if outcome.regret is not None:
            diagram = outcome.regret.diagram
        elif outcome.minmax is not None and outcome.minmax.solution is not None:
            diagram = outcome.minmax.solution.strategy
        if diagram is not None:
            write_dot(diagram, out_dir / STRATEGY_DOT_FILE, name="strategy")
    return out_dir


def status_for(error: SynthesisError) -> RunStatus:
    return {
        2: RunStatus.INFEASIBLE,
        3: RunStatus.CAP_EXCEEDED,
        4: RunStatus.MISMATCH,
    }.get(error.exit_code, RunStatus.ERROR)


def failure_report(config: RunConfig, error: SynthesisError) -> RunReport:
    source = config.source.instance or config.source.pddl_problem or ""
    return RunReport(
        instance=Path(source).stem,
        formula=config.formula or "",
        solver=config.solver,
        objective=config.objective,
        budget=config.budget,
        seed=config.seed,
        status=status_for(error),
        message=error.message,
    )


# ----------------------
# Artifacts back to arenas
# ----------------------
def load_artifact(path: str | Path) -> StrategyArtifact:
    try:
        return StrategyArtifact.model_validate_json(Path(path).read_text(encoding="utf-8"))
    except ValidationError as e:
        raise StrategyMismatchError(f"Not a strategy artifact: {e.errors()[0]['msg']}")


def check_digest(prepared: Prepared, artifact: StrategyArtifact) -> None:
    if prepared.digest != artifact.digest:
        raise StrategyMismatchError(
            "Artifact was synthesised for a different instance or formula "
            f"({artifact.digest[:12]} != {prepared.digest[:12]})"
        )


def _entry_key(entry: StrategyEntry, vertices: dict[str, int]) -> tuple:
    if entry.state not in vertices:
        raise StrategyMismatchError(f"Artifact names unknown state '{entry.state}'")
    key: tuple = (vertices[entry.state], entry.dfa_state)
    if entry.utility is not None:
        key += (entry.utility, INFINITY if entry.best_alt is None else entry.best_alt)
    return key


def strategy_arena(
    prepared: Prepared, artifact: StrategyArtifact, max_states: int | None = None
) -> tuple[Arena, dict[int, int]]:
    """Explicit arena the artifact's strategy plays on, with the strategy over its state ids."""
    vertices = {prepared.game.state_text(v): v for v in prepared.game.robot_vertices()}
    names = prepared.task.robot_action_names()
    keyed: dict[tuple, int] = {}
    for entry in artifact.entries:
        if entry.action not in names:
            raise StrategyMismatchError(f"Artifact names unknown action '{entry.action}'")
        keyed[_entry_key(entry, vertices)] = names.index(entry.action)

    if artifact.objective == Objective.MINMAX:
        arena: Arena = build_product(prepared.game, prepared.dfa, max_states=max_states)
    else:
        if artifact.budget is None:
            raise StrategyMismatchError("Regret artifact carries no budget")
        regret = solve_regret_explicit(prepared.game, prepared.dfa, artifact.budget, max_states=max_states)
        arena = regret.arena

    ids: dict[int, int] = {}
    for key, action in keyed.items():
        sid = arena.index.get((Player.ROBOT, *key))
        if sid is None:
            raise StrategyMismatchError(f"Artifact state {key} is not in the rebuilt game")
        ids[sid] = action
    return arena, ids
