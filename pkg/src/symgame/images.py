"""
Compose-based pre-images, controllable predecessors and forward reachability.
"""

import logging

from src.ddlib import NodeRef
from src.enums import ApplyOp, PreMode, QuantifyMode
from src.exceptions import NonBooleanOperandError
from src.symgame.encoding import SymbolicGame
from src.symgame.relations import TransitionRelation, TransitionVector, relational

logger = logging.getLogger(__name__)


def pre_image(sg: SymbolicGame, omega: NodeRef, tv: TransitionVector) -> NodeRef:
    """pre(X, I, O): edges of tv whose successor lies in omega."""
    return tv.guard & sg.manager.vector_compose(omega, tv.substitution(sg))


def dfa_step(sg: SymbolicGame, omega: NodeRef) -> NodeRef:
    """omega(X, Y) -> omega(X, zeta(X, Y)): advance the DFA on the current label."""
    if sg.sdfa is None:
        return omega
    return sg.manager.vector_compose(omega, sg.sdfa.substitution())


def product_pre(sg: SymbolicGame, omega: NodeRef, tv: TransitionVector) -> NodeRef:
    """Substitute Y first, then X (and U): predecessors in the DFA-game product."""
    m = sg.manager
    stepped = dfa_step(sg, omega)
    return tv.guard & m.vector_compose(stepped, tv.substitution(sg))


def _edges_into(sg: SymbolicGame, omega: NodeRef, tr: TransitionRelation) -> NodeRef:
    result = sg.manager.zero
    for tv in tr:
        result = result | product_pre(sg, omega, tv)
    return result


def controllable_pre(
    sg: SymbolicGame,
    omega: NodeRef,
    tr: TransitionRelation,
    mode: PreMode = PreMode.QUAL,
) -> NodeRef:
    """
    QUAL: states where some robot action forces omega against every human reply.
    QUANT: one Bellman backup of the value function omega (robot MIN, human MAX).
    """
    mode = PreMode(mode)
    m = sg.manager
    if mode == PreMode.QUAL:
        if not m.is_boolean(omega):
            raise NonBooleanOperandError("Qualitative pre-image needs a boolean set")
        pre = _edges_into(sg, omega, tr)
        forced = m.forall(sg.i_vars, ~sg.valid | pre)
        return sg.valid_state & m.exists(sg.o_vars, sg.valid_robot & forced)
    return backup(sg, omega, tr)


def action_values(
    sg: SymbolicGame,
    values: NodeRef,
    tr: TransitionRelation,
    human: QuantifyMode = QuantifyMode.MAX_ABSTRACT,
    add_cost: bool = True,
) -> NodeRef:
    """
    Q(state, O) = cost(O) + human_I( values[Y <- zeta][X <- eta] ).

    Invalid human codes are neutral under `human`; robot codes without a
    valid reply are INFINITY.
    """
    m = sg.manager
    neutral = m.zero if human == QuantifyMode.MAX_ABSTRACT else m.infinity
    stepped = dfa_step(sg, values)
    q = m.infinity
    for tv in tr:
        successor = m.vector_compose(stepped, tv.substitution(sg))
        over_human = m.quantify(human, m.ite(tv.guard, successor, neutral), sg.i_vars)
        if add_cost and tv.cost:
            over_human = m.apply(ApplyOp.PLUS, over_human, m.constant(tv.cost))
        enabled = m.exists(sg.i_vars, tv.guard)
        q = m.apply(ApplyOp.MIN, q, m.ite(enabled, over_human, m.infinity))
    return q


def backup(
    sg: SymbolicGame,
    values: NodeRef,
    tr: TransitionRelation,
    human: QuantifyMode = QuantifyMode.MAX_ABSTRACT,
    robot: QuantifyMode = QuantifyMode.MIN_ABSTRACT,
    add_cost: bool = True,
) -> NodeRef:
    """ADD Bellman backup: robot_O of action_values, INFINITY off valid states."""
    m = sg.manager
    q = action_values(sg, values, tr, human=human, add_cost=add_cost)
    return m.ite(sg.valid_state, m.quantify(robot, q, sg.o_vars), m.infinity)


def image(sg: SymbolicGame, states: NodeRef, relation: NodeRef) -> NodeRef:
    """Successors of states (over X, Y, U), renamed back to unprimed blocks."""
    m = sg.manager
    current = sg.x_vars + sg.y_vars + sg.u_vars + sg.o_vars + sg.i_vars
    stepped = m.exists(current, states & relation)
    rename = [
        (p, m.var_ref(v))
        for primed, plain in ((sg.xp_vars, sg.x_vars), (sg.yp_vars, sg.y_vars), (sg.up_vars, sg.u_vars))
        for p, v in zip(primed, plain)
    ]
    return m.vector_compose(stepped, rename)


def reachable(
    sg: SymbolicGame,
    init: NodeRef,
    frontier_guard: NodeRef | None = None,
) -> NodeRef:
    """
    Least fixpoint of the forward image from init. States outside
    frontier_guard are kept but not expanded (absorbing accepting states,
    overshoot sink).
    """
    m = sg.manager
    relation = relational(sg)
    guard = frontier_guard if frontier_guard is not None else m.one
    reached = init
    frontier = init
    rounds = 0
    while frontier != m.zero:
        new = image(sg, frontier & guard, relation) & ~reached
        reached = reached | new
        frontier = new
        rounds += 1
    logger.debug(f"Reachability settled after {rounds} rounds, {m.node_count(reached)} nodes")
    return reached
