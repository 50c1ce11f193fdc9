"""Small games shared by the solver, regret and command tests."""

from pathlib import Path

from src.domain import GroundAction, StripsTask, build_game, gen_benchmark
from src.enums import SolverKind
from src.ltlf import parse, to_dfa
from src.solvers import solve_minmax
from src.utils.budget import auto_budget

DATA = Path(__file__).resolve().parent.parent / "data"

# Seeds for the small oracle instances; fixed so failures reproduce
ORACLE_SEEDS = [0, 1, 2, 3, 4, 5, 6, 7]
TINY_SHAPES = [(2, 1), (3, 1), (4, 1), (3, 2)]

# (locations, objects, human region fraction): every winning strategy fits in memory
ENUMERABLE_SHAPES = [(2, 1, 0.25), (3, 1, 0.25), (4, 1, 0.25), (4, 1, 0.5), (5, 1, 0.5)]
BUDGET_SLACK = [0, 1, 2, 4]


def act(name: str, pre: set[str], add: set[str], delete: set[str], cost: int = 0) -> GroundAction:
    return GroundAction(
        schema=name,
        args=(),
        pre=frozenset(pre),
        add=frozenset(add),
        delete=frozenset(delete),
        cost=cost,
    )


def detour_task() -> StripsTask:
    """
    The robot either finishes alone for 6 (a) or takes a cheap step (b)
    after which the human may finish the job; if not, the robot pays 6 more (c).
    """
    return StripsTask(
        name="detour",
        init=frozenset({"start"}),
        goal=frozenset({"done"}),
        robot_actions=[
            act("a", {"start"}, {"done"}, {"start"}, cost=6),
            act("b", {"start"}, {"mid"}, {"start"}, cost=1),
            act("c", {"mid"}, {"done"}, {"mid"}, cost=6),
        ],
        human_actions=[act("help", {"mid"}, {"done"}, {"mid"})],
    )


def compile_pair(task: StripsTask, formula: str | None = None):
    game = build_game(task)
    text = formula or f"F({' & '.join(task.goal_atoms())})"
    return game, to_dfa(parse(text, propositions=task.propositions))


def bench_pair(num_locations: int, num_objects: int, seed: int, formula: str | None = None, fraction: float = 0.25):
    task = gen_benchmark(num_locations, num_objects, seed=seed, human_region_fraction=fraction).to_strips()
    return compile_pair(task, formula)


def tiny_pairs(seeds=ORACLE_SEEDS[:3]):
    return [bench_pair(n_l, n_o, seed) for (n_l, n_o) in TINY_SHAPES for seed in seeds]


def enumerable_cases() -> list[tuple]:
    """(game, dfa, budget) for 20 instances small enough for the regret oracle; budgets stay within 10."""
    cases = []
    for i, (n_l, n_o, fraction) in enumerate(ENUMERABLE_SHAPES):
        for slack in BUDGET_SLACK:
            game, dfa = bench_pair(n_l, n_o, seed=i + slack, fraction=fraction)
            value = solve_minmax(game, dfa, solver=SolverKind.EXPLICIT).value
            cases.append((game, dfa, auto_budget(value) + slack))
    return cases
