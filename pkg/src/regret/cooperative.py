"""
Cooperative (min-min) values on the graph of utility and the best
alternative payoff ba of every robot edge.
"""

import logging

from src.ddlib import INFINITY, NodeRef, assign_code
from src.ddlib.terminals import Value
from src.enums import Player, QuantifyMode
from src.exceptions import DivergenceError
from src.regret.utility import SymbolicUtility
from src.solvers.product import Arena
from src.solvers.symbolic import iteration_cap
from src.symgame import action_values, backup
from src.symgame.encoding import SymbolicGame

logger = logging.getLogger(__name__)

EdgeAlternates = dict[int, dict[int, Value]]


def cooperative_values(ug: Arena) -> list[Value]:
    """Least leaf utility reachable when both players minimise; the sink is INFINITY."""
    values: list[Value] = [INFINITY] * len(ug)
    for s in ug.accepting:
        values[s] = ug.leaf.get(s, 0)
    changed = True
    while changed:
        changed = False
        for s in range(len(ug)):
            if s in ug.accepting or s in ug.sinks:
                continue
            best = min((values[e.target] for e in ug.edges[s]), default=INFINITY)
            if best < values[s]:
                values[s] = best
                changed = True
    return values


def best_alternates(ug: Arena, cval: list[Value]) -> EdgeAlternates:
    """ba(e) for every robot edge: the best cooperative value among its siblings."""
    ba: EdgeAlternates = {}
    for s in range(len(ug)):
        if ug.players[s] != Player.ROBOT or s in ug.accepting or s in ug.sinks:
            continue
        out = ug.edges[s]
        ba[s] = {
            e.action: min((cval[other.target] for other in out if other is not e), default=INFINITY)
            for e in out
        }
    return ba


def cooperative_values_symbolic(su: SymbolicUtility) -> tuple[NodeRef, int]:
    """Min-min fixpoint as an ADD over (X, Y, U); leaves are pinned to u."""
    sg = su.sg
    m = sg.manager
    leaf = m.ite(su.leaves, su.utility_terminal(), m.infinity)
    cap = iteration_cap(sg)
    values = leaf
    rounds = 0
    while True:
        if rounds >= cap:
            raise DivergenceError(f"Cooperative values did not settle within {cap} rounds")
        rounds += 1
        stepped = backup(
            sg,
            values,
            su.tr,
            human=QuantifyMode.MIN_ABSTRACT,
            robot=QuantifyMode.MIN_ABSTRACT,
            add_cost=False,
        )
        updated = m.ite(su.leaves, leaf, stepped)
        if updated == values:
            break
        values = updated
    logger.debug(f"Cooperative values settled after {rounds} rounds, {m.node_count(values)} nodes")
    return values, rounds


def state_assignment(sg: SymbolicGame, state: tuple[int, int, int], action: int | None = None) -> dict[int, bool]:
    v, z, u = state
    assignment = assign_code(sg.x_vars, sg.state_codec[v])
    assignment.update(assign_code(sg.y_vars, z))
    assignment.update(assign_code(sg.u_vars, u))
    if action is not None:
        assignment.update(assign_code(sg.o_vars, sg.robot_codec[action]))
    return assignment


def best_alternates_symbolic(su: SymbolicUtility, cval: NodeRef) -> dict[tuple[int, int, int], dict[int, Value]]:
    """
    Decode ba explicitly: for every reachable non-leaf (v, z, u) and enabled
    robot action, the least cooperative value over the other actions.
    """
    sg = su.sg
    m = sg.manager
    q = action_values(sg, cval, su.tr, human=QuantifyMode.MIN_ABSTRACT, add_cost=False)
    frontier = su.reach & ~su.leaves & ~su.overshoot & sg.valid_product()
    ba: dict[tuple[int, int, int], dict[int, Value]] = {}
    for state in sg.iter_product_states(frontier):
        actions = sorted({je.robot_action for je in sg.agame.edges[state[0]]})
        q_of = {a: m.eval(q, state_assignment(sg, state, a)) for a in actions}
        ba[state] = {a: min((q_of[other] for other in actions if other != a), default=INFINITY) for a in actions}
    logger.debug(f"Decoded best alternates at {len(ba)} states")
    return ba
