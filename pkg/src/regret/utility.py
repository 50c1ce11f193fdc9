"""
Graph of utility: product states paired with the cost paid so far. Robot
moves add their cost to u; any move past the budget lands in a single
overshoot sink. Plays stop at the first accepting product state.
"""

import logging
from dataclasses import dataclass

import humanize

from src.ddlib import INFINITY, NodeRef, code_bits
from src.domain.game import Edge, Game, abstract
from src.enums import Player, SolverKind
from src.ltlf.dfa import Dfa
from src.solvers.product import Arena, ProductGame, initial_dfa_state
from src.symgame import build_monolithic, build_partitioned, encode, reachable
from src.symgame.encoding import SymbolicGame
from src.symgame.relations import TransitionRelation

logger = logging.getLogger(__name__)

SINK = ("sink",)


def build_utility_explicit(product: ProductGame, budget: int) -> Arena:
    """Reachable (s, u) pairs, keys (player, vertex, dfa state, u)."""
    if budget < 0:
        raise ValueError(f"Budget must be non-negative, got {budget}")
    ug = Arena()
    start, _ = ug.add_state(product.keys[product.initial] + (0,), Player.ROBOT)
    ug.initial = start
    stack = [start]

    def visit(key: tuple) -> int:
        sid, added = ug.add_state(key, key[0])
        if added:
            stack.append(sid)
        return sid

    while stack:
        s = stack.pop()
        player, v, z, u = ug.keys[s]
        ps = product.index[(player, v, z)]
        if player == Player.ROBOT and ps in product.accepting:
            ug.accepting.add(s)
            ug.leaf[s] = u
            continue
        out = []
        for e in product.edges[ps]:
            spent = u + e.cost
            if spent > budget:
                sink, _ = ug.add_state(SINK, Player.ROBOT)
                ug.sinks.add(sink)
                target = sink
            else:
                target = visit(product.keys[e.target] + (spent,))
            out.append(Edge(action=e.action, cost=e.cost, target=target))
        ug.edges[s] = out

    logger.info(
        f"Utility graph (B={budget}): {humanize.intcomma(len(ug))} states, "
        f"{len(ug.accepting)} leaves, overshoot sink {'present' if ug.sinks else 'absent'}"
    )
    return ug


@dataclass
class SymbolicUtility:
    sg: SymbolicGame
    tr: TransitionRelation
    init: NodeRef
    leaves: NodeRef
    overshoot: NodeRef
    reach: NodeRef

    @property
    def budget(self) -> int:
        return self.sg.budget

    def utility_terminal(self) -> NodeRef:
        """ADD over U mapping each in-budget code to its utility, INFINITY elsewhere."""
        m = self.sg.manager
        width = len(self.sg.u_vars)
        table = {code_bits(u, width): u for u in range(self.budget + 1)}
        return m.from_table(self.sg.u_vars, table, default=INFINITY)


def within_budget(sg: SymbolicGame) -> NodeRef:
    result = sg.manager.zero
    for u in range(sg.budget + 1):
        result = result | sg.utility_cube(u)
    return result


def build_utility_symbolic(
    game: Game,
    dfa: Dfa,
    budget: int,
    solver: SolverKind = SolverKind.SYMBOLIC_MONOLITHIC,
    max_vars: int | None = None,
) -> SymbolicUtility:
    """Encode with a U block of width_for(B + 2) and restrict to reachable (s, u)."""
    sg = encode(abstract(game), dfa=dfa, budget=budget, max_vars=max_vars)
    tr = build_partitioned(sg) if SolverKind(solver) == SolverKind.SYMBOLIC_PARTITIONED else build_monolithic(sg)
    z0 = initial_dfa_state(game, dfa)
    init = sg.state_cube(game.initial) & sg.dfa_cube(z0) & sg.utility_cube(0)
    leaves = sg.valid_state & sg.valid_dfa() & sg.sdfa.accepting & within_budget(sg)
    overshoot = sg.utility_cube(sg.overshoot)
    reach = reachable(sg, init, frontier_guard=~leaves & ~overshoot)
    logger.info(
        f"Symbolic utility graph (B={budget}): "
        f"{humanize.intcomma(sg.manager.sat_count(reach, sg.x_vars + sg.y_vars + sg.u_vars))} reachable (s, u), "
        f"{sg.manager.node_count(reach)} nodes"
    )
    return SymbolicUtility(sg=sg, tr=tr, init=init, leaves=leaves, overshoot=overshoot, reach=reach)
