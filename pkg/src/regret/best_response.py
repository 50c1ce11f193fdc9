"""
Graph of best response and the min-max regret game played on it.

A state ((s, u), b) remembers b, the least best-alternative payoff seen
along the play. Leaves weigh u - min(b, u); the overshoot sink is losing.
"""

import logging
from dataclasses import dataclass, field
from typing import Hashable

import humanize

from src.ddlib import NodeRef
from src.ddlib.terminals import INFINITY, Value, is_finite
from src.domain.game import Edge
from src.enums import Player
from src.regret.cooperative import EdgeAlternates
from src.solvers.explicit import explicit_vi, strategy_values
from src.solvers.product import Arena

logger = logging.getLogger(__name__)

RegretKey = tuple[int, int, int, Value]


def leaf_regret(u: int, b: Value) -> Value:
    return u - min(b, u) if is_finite(b) else 0


@dataclass
class RegretResult:
    budget: int
    feasible: bool
    regret: Value
    strategy: dict[RegretKey, int]
    initial: RegretKey
    stats: dict = field(default_factory=dict)
    arena: Arena | None = None
    diagram: NodeRef | None = None

    @property
    def value(self) -> int | None:
        return self.regret if self.feasible else None


def build_best_response(ug: Arena, ba: EdgeAlternates) -> Arena:
    """Unfold ug with the running minimum b; keys gain a trailing b."""
    brg = Arena()
    start, _ = brg.add_state(ug.keys[ug.initial] + (INFINITY,), Player.ROBOT)
    brg.initial = start
    origin: dict[int, int] = {start: ug.initial}
    stack = [start]

    def visit(key: Hashable, source: int, player: Player) -> int:
        sid, added = brg.add_state(key, player)
        if added:
            origin[sid] = source
            if source in ug.sinks:
                brg.sinks.add(sid)
            else:
                stack.append(sid)
        return sid

    while stack:
        s = stack.pop()
        us = origin[s]
        b = brg.keys[s][-1]
        if us in ug.accepting:
            brg.accepting.add(s)
            brg.leaf[s] = leaf_regret(ug.leaf[us], b)
            continue
        out = []
        for e in ug.edges[us]:
            if ug.players[us] == Player.ROBOT:
                b_next = min(b, ba[us][e.action])
            else:
                b_next = b
            key = ug.keys[e.target] + (b_next,) if e.target not in ug.sinks else ug.keys[e.target]
            target = visit(key, e.target, ug.players[e.target])
            out.append(Edge(action=e.action, cost=e.cost, target=target))
        brg.edges[s] = out

    logger.info(
        f"Best-response graph: {humanize.intcomma(len(brg))} states, "
        f"{len({k[-1] for k in brg.keys if len(k) == 5})} distinct b values"
    )
    return brg


def regret_key(brg: Arena, s: int) -> RegretKey:
    """(vertex, dfa state, u, b) of a best-response state."""
    return tuple(brg.keys[s][1:])


def follow(brg: Arena, strategy: dict[int, int]) -> dict[int, int]:
    """Strategy entries at states reachable under it, against every human reply."""
    kept: dict[int, int] = {}
    stack = [brg.initial]
    seen = {brg.initial}
    while stack:
        s = stack.pop()
        if brg.players[s] == Player.ROBOT:
            if s not in strategy or s in brg.accepting:
                continue
            kept[s] = strategy[s]
            out = [e for e in brg.edges[s] if e.action == strategy[s]]
        else:
            out = brg.edges[s]
        for e in out:
            if e.target not in seen:
                seen.add(e.target)
                stack.append(e.target)
    return kept


def regret_vi(brg: Arena, budget: int) -> RegretResult:
    """
    Robot minimises, human maximises the leaf regret; no cost accumulates.
    The returned strategy covers the states its own plays can reach.
    """
    result = explicit_vi(brg, with_costs=False)
    regret = result.values[brg.initial]
    strategy = {regret_key(brg, s): a for s, a in follow(brg, result.strategy).items()}
    feasible = is_finite(regret)
    logger.info(f"Regret game settled after {result.iterations} rounds: reg* = {regret}, feasible {feasible}")
    return RegretResult(
        budget=budget,
        feasible=feasible,
        regret=regret,
        strategy=strategy,
        initial=regret_key(brg, brg.initial),
        stats={"best_response_states": len(brg), "regret_rounds": result.iterations},
        arena=brg,
    )


def strategy_ids(brg: Arena, strategy: dict[RegretKey, int]) -> dict[int, int]:
    """Map a keyed regret strategy onto state ids of brg, dropping unknown keys."""
    ids: dict[int, int] = {}
    for key, action in strategy.items():
        sid = brg.index.get((Player.ROBOT, *key))
        if sid is not None:
            ids[sid] = action
    return ids


def evaluate_strategy(brg: Arena, strategy: dict[RegretKey, int]) -> Value:
    """Worst-case regret a keyed strategy induces from the initial state."""
    worst, _ = strategy_values(brg, strategy_ids(brg, strategy), with_costs=False)
    return worst[brg.initial]
