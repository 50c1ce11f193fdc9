"""
Brute-force regret by enumerating strategies.

Every robot strategy that accepts within the budget against every human
reply is built as an explicit tree over play histories. Each of its plays
fixes the human's answers along that play; off the play the human is free,
so the cheapest alternative is whatever another robot strategy can reach by
leaving the play at one of its robot turns. Regret of a play is its cost
minus that alternative; a strategy's regret is its worst play, and reg* is
the least strategy regret.

Shares nothing with the utility and best-response graphs beyond the product
game, so it can referee them on small instances.
"""

import itertools
import logging
from dataclasses import dataclass
from functools import lru_cache

import humanize

from src.config.settings import get_settings
from src.ddlib.terminals import INFINITY, Value, is_finite
from src.domain.game import Edge, Game
from src.enums import RegretMode
from src.exceptions import OracleSizeExceeded
from src.ltlf.dfa import Dfa
from src.solvers.product import ProductGame, build_product

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class StrategyTree:
    """One robot choice at a history and the continuation after each human reply."""

    state: int
    cost: int
    edge: Edge | None = None
    replies: tuple["StrategyTree", ...] = ()

    @property
    def accepting(self) -> bool:
        return self.edge is None


@dataclass(frozen=True)
class PlayRecord:
    """A complete play: robot states visited with the cost paid on arrival."""

    states: tuple[int, ...]
    costs: tuple[int, ...]
    edges: tuple[Edge, ...]

    @property
    def payoff(self) -> int:
        return self.costs[-1]


class _Enumerator:
    def __init__(self, product: ProductGame, budget: int):
        self.product = product
        self.budget = budget
        self.count = lru_cache(maxsize=None)(self._count)
        self.cheapest = lru_cache(maxsize=None)(self._cheapest)
        self.trees: dict[tuple[int, int], list[StrategyTree]] = {}

    def _count(self, s: int, u: int) -> int:
        """Winning strategies from robot state s with u already paid."""
        if s in self.product.accepting:
            return 1
        total = 0
        for e in self.product.edges[s]:
            paid = u + e.cost
            if paid > self.budget:
                continue
            replies = self.product.edges[e.target]
            if not replies:
                continue
            ways = 1
            for r in replies:
                ways *= self.count(r.target, paid)
            total += ways
        return total

    def strategies(self, s: int, u: int) -> list[StrategyTree]:
        if (s, u) in self.trees:
            return self.trees[(s, u)]
        if s in self.product.accepting:
            self.trees[(s, u)] = [StrategyTree(state=s, cost=u)]
            return self.trees[(s, u)]
        found: list[StrategyTree] = []
        for e in self.product.edges[s]:
            paid = u + e.cost
            replies = self.product.edges[e.target]
            if paid > self.budget or not replies:
                continue
            if any(self.count(r.target, paid) == 0 for r in replies):
                continue
            subtrees = [self.strategies(r.target, paid) for r in replies]
            found.extend(
                StrategyTree(state=s, cost=u, edge=e, replies=combo) for combo in itertools.product(*subtrees)
            )
        self.trees[(s, u)] = found
        return found

    def _cheapest(self, s: int, u: int) -> Value:
        """Least cost at which some continuation accepts, every move chosen helpfully."""
        if s in self.product.accepting:
            return u
        best: Value = INFINITY
        for e in self.product.edges[s]:
            paid = u + e.cost
            if paid > self.budget:
                continue
            for r in self.product.edges[e.target]:
                best = min(best, self.cheapest(r.target, paid))
        return best


def plays_of(tree: StrategyTree, prefix: tuple = ((), (), ())):
    """Every play the strategy allows, one per combination of human replies."""
    states, costs, edges = prefix
    states, costs = states + (tree.state,), costs + (tree.cost,)
    if tree.accepting:
        yield PlayRecord(states=states, costs=costs, edges=edges)
        return
    for sub in tree.replies:
        yield from plays_of(sub, (states, costs, edges + (tree.edge,)))


def best_alternative(enum: _Enumerator, play: PlayRecord) -> Value:
    """Cheapest play another robot strategy reaches by leaving `play` at a robot turn."""
    best: Value = INFINITY
    for s, u, taken in zip(play.states, play.costs, play.edges):
        for e in enum.product.edges[s]:
            if e is taken or u + e.cost > enum.budget:
                continue
            for r in enum.product.edges[e.target]:
                best = min(best, enum.cheapest(r.target, u + e.cost))
    return best


def play_regret(payoff: int, alternative: Value, mode: RegretMode) -> Value:
    if mode == RegretMode.ALL_ALTERNATES:
        # the strategy itself is one of the alternatives
        return payoff - min(payoff, alternative)
    return payoff - alternative if is_finite(alternative) else 0


def brute_force_regret(
    game: Game,
    dfa: Dfa,
    budget: int,
    mode: RegretMode = RegretMode.ALL_ALTERNATES,
    max_states: int | None = None,
    max_strategies: int | None = None,
) -> Value:
    """
    min over winning robot strategies of max over human strategies of
    Val(sigma, tau) - min over alternatives Val(sigma', tau). Winning means
    every play accepts within the budget. INFINITY when no strategy wins.
    Alternatives costing more than the budget are ignored.
    """
    mode = RegretMode(mode)
    settings = get_settings()
    state_cap = max_states if max_states is not None else settings.oracle_max_states
    strategy_cap = max_strategies if max_strategies is not None else settings.oracle_max_strategies
    product = build_product(game, dfa, absorbing=True)
    if len(product) > state_cap:
        raise OracleSizeExceeded(
            f"Product has {humanize.intcomma(len(product))} states, oracle accepts at most {state_cap}"
        )
    if any(e.cost <= 0 for s in product.robot_states() for e in product.edges[s]):
        raise ValueError("Brute-force regret needs strictly positive robot costs")

    enum = _Enumerator(product, budget)
    total = enum.count(product.initial, 0)
    if total > strategy_cap:
        raise OracleSizeExceeded(
            f"{humanize.intcomma(total)} winning strategies, "
            f"oracle enumerates at most {humanize.intcomma(strategy_cap)}"
        )

    value: Value = INFINITY
    for tree in enum.strategies(product.initial, 0):
        worst: Value = max(
            play_regret(play.payoff, best_alternative(enum, play), mode) for play in plays_of(tree)
        )
        value = min(value, worst)

    logger.info(f"Brute-force regret ({mode.value}, B={budget}): {value} over {humanize.intcomma(total)} strategies")
    return value
