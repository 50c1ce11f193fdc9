from src.regret.best_response import (
    RegretResult,
    build_best_response,
    evaluate_strategy,
    leaf_regret,
    regret_vi,
)
from src.regret.cooperative import (
    best_alternates,
    best_alternates_symbolic,
    cooperative_values,
    cooperative_values_symbolic,
)
from src.regret.oracle import brute_force_regret
from src.regret.pipeline import cooperation_payoffs, cooperation_plays, solve_regret, solve_regret_explicit
from src.regret.symbolic import build_best_response_symbolic, regret_vi_symbolic, solve_regret_symbolic
from src.regret.utility import SINK, build_utility_explicit, build_utility_symbolic

__all__ = [
    "SINK",
    "RegretResult",
    "best_alternates",
    "best_alternates_symbolic",
    "brute_force_regret",
    "build_best_response",
    "build_best_response_symbolic",
    "build_utility_explicit",
    "build_utility_symbolic",
    "cooperation_payoffs",
    "cooperation_plays",
    "cooperative_values",
    "cooperative_values_symbolic",
    "evaluate_strategy",
    "leaf_regret",
    "regret_vi",
    "regret_vi_symbolic",
    "solve_regret",
    "solve_regret_explicit",
    "solve_regret_symbolic",
]
