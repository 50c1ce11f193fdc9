"""
Min-max value iteration over explicit arenas.

Updates are synchronous: round k reads only round k-1 values. A robot
state's strategy is rewritten only on strict improvement, taking the
smallest action id among the minimisers, so the result matches the
symbolic solvers round for round.
"""

import logging
from dataclasses import dataclass, field

from src.ddlib.terminals import INFINITY, Value
from src.enums import Player
from src.exceptions import DivergenceError
from src.solvers.product import Arena

logger = logging.getLogger(__name__)


@dataclass
class ValueIterationResult:
    values: list[Value]
    strategy: dict[int, int]
    iterations: int
    stats: dict = field(default_factory=dict)

    def value(self, s: int) -> Value:
        return self.values[s]


def _terminal_value(arena: Arena, s: int, with_costs: bool) -> Value:
    """Accumulated-cost payoffs end at 0; terminal-weight payoffs read `leaf`."""
    return 0 if with_costs else arena.leaf.get(s, 0)


def explicit_vi(
    arena: Arena,
    with_costs: bool = True,
    max_iterations: int | None = None,
) -> ValueIterationResult:
    """
    Least fixpoint from INFINITY with accepting states pinned to their leaf
    value. The human maximises; the robot minimises. Without costs only the
    leaf values matter.
    """
    n = len(arena)
    cap = max_iterations if max_iterations is not None else 2 * n + 4
    values: list[Value] = [INFINITY] * n
    for s in arena.accepting:
        values[s] = _terminal_value(arena, s, with_costs)
    strategy: dict[int, int] = {}

    iterations = 0
    changed = True
    while changed:
        if iterations >= cap:
            raise DivergenceError(f"Value iteration did not settle within {cap} rounds")
        iterations += 1
        changed = False
        previous = list(values)
        for s in range(n):
            if s in arena.accepting or s in arena.sinks:
                continue
            out = arena.edges[s]
            if arena.players[s] == Player.ROBOT:
                best: Value = INFINITY
                choice = None
                for e in sorted(out, key=lambda e: e.action):
                    candidate = previous[e.target]
                    if with_costs and candidate is not INFINITY:
                        candidate = candidate + e.cost
                    if candidate < best:
                        best, choice = candidate, e.action
                if best < values[s]:
                    values[s] = best
                    strategy[s] = choice
                    changed = True
            else:
                worst: Value = max((previous[e.target] for e in out), default=INFINITY)
                if worst != values[s]:
                    values[s] = worst
                    changed = True

    logger.debug(f"Explicit value iteration settled after {iterations} rounds")
    return ValueIterationResult(values=values, strategy=strategy, iterations=iterations)


def strategy_values(arena: Arena, strategy: dict[int, int], with_costs: bool = True) -> tuple[list[Value], list[Value]]:
    """
    Payoffs of a fixed robot strategy from every state: (worst, best) over
    human replies. States without a strategy entry are INFINITY.
    """
    n = len(arena)
    worst: list[Value] = [INFINITY] * n
    best: list[Value] = [INFINITY] * n
    for s in arena.accepting:
        worst[s] = best[s] = _terminal_value(arena, s, with_costs)

    def successors(s: int):
        if arena.players[s] == Player.ROBOT:
            return [e for e in arena.edges[s] if e.action == strategy.get(s)]
        return arena.edges[s]

    changed = True
    while changed:
        changed = False
        for table, pick in ((worst, max), (best, min)):
            previous = list(table)
            for s in range(n):
                if s in arena.accepting or s in arena.sinks:
                    continue
                out = successors(s)
                if not out:
                    continue
                candidates = []
                for e in out:
                    value = previous[e.target]
                    if with_costs and value is not INFINITY and arena.players[s] == Player.ROBOT:
                        value = value + e.cost
                    candidates.append(value)
                value = pick(candidates)
                if value < table[s]:
                    table[s] = value
                    changed = True
    return worst, best
