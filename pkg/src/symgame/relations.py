"""
Monolithic (one vector per cost class) and partitioned (one vector per robot
action) transition relations, plus the utility-counter vectors and the
relational form used for forward reachability.
"""

import logging
from dataclasses import dataclass, field

from src.ddlib import NodeRef, code_bits
from src.symgame.encoding import SymbolicGame

logger = logging.getLogger(__name__)


@dataclass
class TransitionVector:
    """eta restricted to the edges allowed by `guard`, with their common cost."""

    key: int
    cost: int
    guard: NodeRef
    eta: list[NodeRef]
    eta_u: list[NodeRef] = field(default_factory=list)
    extra: list[tuple[int, NodeRef]] = field(default_factory=list)

    def substitution(self, sg: SymbolicGame) -> list[tuple[int, NodeRef]]:
        subst = list(zip(sg.x_vars, self.eta))
        if self.eta_u:
            subst += list(zip(sg.u_vars, self.eta_u))
        return subst + self.extra


@dataclass
class TransitionRelation:
    kind: str
    vectors: list[TransitionVector]

    def __len__(self) -> int:
        return len(self.vectors)

    def __iter__(self):
        return iter(self.vectors)

    @property
    def costs(self) -> list[int]:
        return sorted({tv.cost for tv in self.vectors})

    def node_count(self) -> int:
        if not self.vectors:
            return 0
        manager = self.vectors[0].guard.manager
        return manager.node_count(*(f for tv in self.vectors for f in [tv.guard, *tv.eta, *tv.eta_u]))


def utility_vector(sg: SymbolicGame, cost: int) -> list[NodeRef]:
    """Saturating u + cost over the U block; the identity vector for cost 0."""
    m = sg.manager
    if not sg.u_vars:
        return []
    if cost == 0:
        return [m.var_ref(u) for u in sg.u_vars]
    width = len(sg.u_vars)
    top = sg.overshoot
    rows: list[dict[tuple, int]] = [{} for _ in sg.u_vars]
    for u in range(top + 1):
        nxt = min(u + cost, top)
        for j, bit in enumerate(code_bits(nxt, width)):
            if bit:
                rows[j][code_bits(u, width)] = 1
    return [m.from_table(sg.u_vars, r, default=0) for r in rows]


def _restrict(sg: SymbolicGame, key: int, cost: int, guard: NodeRef) -> TransitionVector:
    guard = sg.valid & guard
    return TransitionVector(
        key=key,
        cost=cost,
        guard=guard,
        eta=[fn & guard for fn in sg.eta],
        eta_u=utility_vector(sg, cost),
    )


def build_monolithic(sg: SymbolicGame) -> TransitionRelation:
    """One vector per distinct robot-action cost, ascending."""
    m = sg.manager
    by_cost: dict[int, NodeRef] = {}
    for a, c in sorted(sg.costs.items()):
        by_cost[c] = by_cost.get(c, m.zero) | sg.robot_cube(a)
    vectors = [_restrict(sg, c, c, g) for c, g in sorted(by_cost.items())]
    tr = TransitionRelation(kind="monolithic", vectors=[tv for tv in vectors if tv.guard != m.zero])
    logger.debug(f"Monolithic relation: {len(tr)} cost classes {tr.costs}, {tr.node_count()} nodes")
    return tr


def build_partitioned(sg: SymbolicGame) -> TransitionRelation:
    """One vector per robot action that is enabled somewhere."""
    m = sg.manager
    vectors = [_restrict(sg, a, c, sg.robot_cube(a)) for a, c in sorted(sg.costs.items())]
    tr = TransitionRelation(kind="partitioned", vectors=[tv for tv in vectors if tv.guard != m.zero])
    logger.debug(f"Partitioned relation: {len(tr)} actions, {tr.node_count()} nodes")
    return tr


def recompose(tr: TransitionRelation) -> list[NodeRef]:
    """OR of every vector, bit by bit."""
    manager = tr.vectors[0].guard.manager
    bits = [manager.zero for _ in tr.vectors[0].eta]
    for tv in tr:
        bits = [acc | fn for acc, fn in zip(bits, tv.eta)]
    return bits


def relational(sg: SymbolicGame) -> NodeRef:
    """R(X, Y, U, O, I, X', Y', U') = valid and every primed bit equals its successor function."""
    m = sg.manager
    r = sg.valid
    for xp, fn in zip(sg.xp_vars, sg.eta):
        r = r & ~(m.var_ref(xp) ^ fn)
    if sg.sdfa is not None:
        to_primed = [(x, m.var_ref(xp)) for x, xp in zip(sg.x_vars, sg.xp_vars)]
        for yp, zeta in zip(sg.yp_vars, sg.sdfa.zeta):
            r = r & ~(m.var_ref(yp) ^ m.vector_compose(zeta, to_primed))
    if sg.u_vars:
        step = m.zero
        for a, c in sorted(sg.costs.items()):
            eq = m.one
            for up, fn in zip(sg.up_vars, utility_vector(sg, c)):
                eq = eq & ~(m.var_ref(up) ^ fn)
            step = step | (sg.robot_cube(a) & eq)
        r = r & step
    return r
