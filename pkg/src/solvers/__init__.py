from src.solvers.explicit import ValueIterationResult, explicit_vi, strategy_values
from src.solvers.minmax import MinmaxResult, layers_identical, solve_explicit, solve_minmax, solve_symbolic
from src.solvers.product import Arena, ProductGame, build_product, initial_dfa_state
from src.solvers.rollout import HumanPolicy, Play, PlayStep, rollout
from src.solvers.symbolic import (
    SymbolicSolution,
    decode_strategy,
    extract_value,
    symbolic_vi,
    symbolic_vi_uniform,
    symbolic_vi_weighted,
)

__all__ = [
    "Arena",
    "HumanPolicy",
    "MinmaxResult",
    "Play",
    "PlayStep",
    "ProductGame",
    "SymbolicSolution",
    "ValueIterationResult",
    "build_product",
    "decode_strategy",
    "explicit_vi",
    "extract_value",
    "initial_dfa_state",
    "layers_identical",
    "rollout",
    "solve_explicit",
    "solve_minmax",
    "solve_symbolic",
    "strategy_values",
    "symbolic_vi",
    "symbolic_vi_uniform",
    "symbolic_vi_weighted",
]
