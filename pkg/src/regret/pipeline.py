"""
End-to-end regret synthesis: the fully explicit pipeline and the front door
that picks it or the symbolic one.
"""

import logging
import time

from src.ddlib.terminals import is_finite
from src.domain.game import Game
from src.enums import SolverKind
from src.ltlf.dfa import Dfa
from src.regret.best_response import RegretResult, build_best_response, regret_vi, strategy_ids
from src.regret.cooperative import best_alternates, cooperative_values
from src.regret.symbolic import solve_regret_symbolic
from src.regret.utility import build_utility_explicit
from src.solvers.minmax import MinmaxResult
from src.solvers.product import build_product
from src.solvers.rollout import HumanPolicy, Play, rollout

logger = logging.getLogger(__name__)


def solve_regret_explicit(game: Game, dfa: Dfa, budget: int, max_states: int | None = None) -> RegretResult:
    phases: dict[str, float] = {}
    started = time.perf_counter()
    product = build_product(game, dfa, max_states=max_states, absorbing=True)
    ug = build_utility_explicit(product, budget)
    phases["utility"] = time.perf_counter() - started

    started = time.perf_counter()
    cval = cooperative_values(ug)
    ba = best_alternates(ug, cval)
    phases["alternates"] = time.perf_counter() - started

    started = time.perf_counter()
    brg = build_best_response(ug, ba)
    result = regret_vi(brg, budget)
    phases["regret"] = time.perf_counter() - started

    result.stats.update(
        {
            "reachable_pairs": sum(1 for s in ug.robot_states() if s not in ug.sinks),
            "ba_values": len({b for row in ba.values() for b in row.values() if is_finite(b)}) + 1,
            "phase_seconds": phases,
        }
    )
    if not result.feasible:
        result.strategy = {}
    return result


def solve_regret(
    game: Game,
    dfa: Dfa,
    budget: int,
    solver: SolverKind = SolverKind.EXPLICIT,
    max_states: int | None = None,
    max_vars: int | None = None,
) -> RegretResult:
    solver = SolverKind(solver)
    if solver == SolverKind.EXPLICIT:
        return solve_regret_explicit(game, dfa, budget, max_states=max_states)
    return solve_regret_symbolic(game, dfa, budget, solver=solver, max_vars=max_vars)


def cooperation_plays(minmax: MinmaxResult, regret: RegretResult) -> dict[str, Play]:
    """
    Rollouts of the min-max and regret strategies against a helpful and an
    adversarial human, keyed "<objective>_<human>". Both results must come
    from the explicit solvers.
    """
    product = minmax.product
    if product is None or regret.arena is None:
        raise ValueError("Cooperation plays need explicit min-max and regret results")
    minmax_ids = {
        s: minmax.strategy[product.robot_key(s)]
        for s in product.robot_states()
        if product.robot_key(s) in minmax.strategy
    }
    regret_ids = strategy_ids(regret.arena, regret.strategy)
    plays: dict[str, Play] = {}
    for name, arena, strategy in (("minmax", product, minmax_ids), ("regret", regret.arena, regret_ids)):
        for policy in (HumanPolicy.cooperative(), HumanPolicy.adversarial()):
            plays[f"{name}_{policy.kind.value}"] = rollout(arena, strategy, policy)
    return plays


def cooperation_payoffs(minmax: MinmaxResult, regret: RegretResult) -> dict[str, int | None]:
    """Payoff of each cooperation play; None where the play never accepts."""
    return {key: play.payoff if play.accepted else None for key, play in cooperation_plays(minmax, regret).items()}
