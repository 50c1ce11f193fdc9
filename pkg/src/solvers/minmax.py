"""
Min-max synthesis through any of the three solvers, with results reported
in one explicit format: values and strategy keyed by (game vertex, dfa state)
over the product states reachable from s0.
"""

import logging
import time
from dataclasses import dataclass, field

from src.ddlib.terminals import INFINITY, Value, is_finite
from src.domain.game import Game, abstract
from src.enums import SolverKind
from src.ltlf.dfa import Dfa
from src.solvers.explicit import explicit_vi
from src.solvers.product import ProductGame, build_product, initial_dfa_state
from src.solvers.symbolic import SymbolicSolution, decode_strategy, symbolic_vi
from src.symgame import build_monolithic, build_partitioned, encode, reachable
from src.symgame.encoding import SymbolicGame

logger = logging.getLogger(__name__)

StateKey = tuple[int, ...]


@dataclass
class MinmaxResult:
    solver: SolverKind
    initial: StateKey
    values: dict[StateKey, Value]
    strategy: dict[StateKey, int]
    iterations: int
    phase_seconds: dict[str, float] = field(default_factory=dict)
    stats: dict = field(default_factory=dict)
    product: ProductGame | None = None
    solution: SymbolicSolution | None = None

    @property
    def value(self) -> Value:
        return self.values.get(self.initial, INFINITY)

    @property
    def feasible(self) -> bool:
        return is_finite(self.value)


def solve_explicit(game: Game, dfa: Dfa, max_states: int | None = None) -> MinmaxResult:
    phases: dict[str, float] = {}
    started = time.perf_counter()
    product = build_product(game, dfa, max_states=max_states)
    phases["product"] = time.perf_counter() - started

    started = time.perf_counter()
    result = explicit_vi(product)
    phases["solve"] = time.perf_counter() - started

    values = {product.robot_key(s): result.values[s] for s in product.robot_states()}
    strategy = {product.robot_key(s): a for s, a in result.strategy.items()}
    return MinmaxResult(
        solver=SolverKind.EXPLICIT,
        initial=product.robot_key(product.initial),
        values=values,
        strategy=strategy,
        iterations=result.iterations,
        phase_seconds=phases,
        stats={
            "states": len(product),
            "edges": product.num_edges,
            "robot_states": len(values),
        },
        product=product,
    )


def encode_product(game: Game, dfa: Dfa, budget: int | None = None, max_vars: int | None = None) -> SymbolicGame:
    return encode(abstract(game), dfa=dfa, budget=budget, max_vars=max_vars)


def solve_symbolic(
    game: Game,
    dfa: Dfa,
    solver: SolverKind = SolverKind.SYMBOLIC_MONOLITHIC,
    max_vars: int | None = None,
) -> MinmaxResult:
    solver = SolverKind(solver)
    phases: dict[str, float] = {}
    started = time.perf_counter()
    sg = encode_product(game, dfa, max_vars=max_vars)
    tr = build_partitioned(sg) if solver == SolverKind.SYMBOLIC_PARTITIONED else build_monolithic(sg)
    phases["encode"] = time.perf_counter() - started

    started = time.perf_counter()
    solution = symbolic_vi(sg, tr)
    phases["solve"] = time.perf_counter() - started

    started = time.perf_counter()
    z0 = initial_dfa_state(game, dfa)
    init = sg.state_cube(game.initial) & sg.dfa_cube(z0)
    reach = reachable(sg, init)
    values: dict[StateKey, Value] = {state: INFINITY for state in sg.iter_product_states(reach)}
    for v in sorted(solution.layers, reverse=True):
        for state in sg.iter_product_states(solution.layers[v] & reach):
            values[state] = v
    strategy = decode_strategy(sg, solution.strategy, reach)
    phases["decode"] = time.perf_counter() - started

    return MinmaxResult(
        solver=solver,
        initial=(game.initial, z0),
        values=values,
        strategy=strategy,
        iterations=solution.iterations,
        phase_seconds=phases,
        stats={
            **solution.stats,
            "vars": sg.var_counts(),
            "relation_nodes": tr.node_count(),
            "vectors": len(tr),
            "robot_states": len(values),
        },
        solution=solution,
    )


def layers_identical(game: Game, dfa: Dfa, max_vars: int | None = None) -> bool:
    """Solve one encoding with both relation forms; layers must be the same handles."""
    sg = encode_product(game, dfa, max_vars=max_vars)
    mono = symbolic_vi(sg, build_monolithic(sg))
    part = symbolic_vi(sg, build_partitioned(sg))
    same = mono.layers == part.layers
    if not same:
        logger.error(f"Layer mismatch: monolithic {sorted(mono.layers)} vs partitioned {sorted(part.layers)}")
    return same


def solve_minmax(
    game: Game,
    dfa: Dfa,
    solver: SolverKind = SolverKind.EXPLICIT,
    max_states: int | None = None,
    max_vars: int | None = None,
) -> MinmaxResult:
    solver = SolverKind(solver)
    if solver == SolverKind.EXPLICIT:
        result = solve_explicit(game, dfa, max_states=max_states)
    else:
        result = solve_symbolic(game, dfa, solver=solver, max_vars=max_vars)
    logger.info(
        f"{solver.value}: value {result.value} at s0 after {result.iterations} rounds, "
        f"{len(result.strategy)} strategy entries"
    )
    return result

