"""
Symbolic value iteration on the encoded product.

Values are kept as layers: B_v holds the states whose current value is v,
and C_v (the union of B_w for w <= v) is the set that can be forced into
the target at cost v or less. One round computes, for every cost class c and
every present value j, the states forcing C_j with an action of cost c; those
states are offered value j + c.
"""

import logging
import time
from dataclasses import dataclass, field

from src.ddlib import INFINITY, NodeRef, read_code
from src.ddlib.terminals import Value
from src.exceptions import DivergenceError
from src.symgame.encoding import SymbolicGame
from src.symgame.images import product_pre
from src.symgame.relations import TransitionRelation, TransitionVector

logger = logging.getLogger(__name__)


@dataclass
class SymbolicSolution:
    sg: SymbolicGame
    layers: dict[int, NodeRef]
    strategy: NodeRef
    iterations: int
    stats: dict = field(default_factory=dict)

    def winning(self) -> NodeRef:
        result = self.sg.manager.zero
        for layer in self.layers.values():
            result = result | layer
        return result

    def cumulative(self, v: int) -> NodeRef:
        result = self.sg.manager.zero
        for w, layer in self.layers.items():
            if w <= v:
                result = result | layer
        return result

    def value_of(self, state: tuple[int, ...]) -> Value:
        return extract_value(self.sg, self.layers, state)


def product_targets(sg: SymbolicGame) -> NodeRef:
    """Valid product states whose DFA component accepts."""
    targets = sg.valid_state & sg.valid_utility()
    if sg.sdfa is not None:
        targets = targets & sg.valid_dfa() & sg.sdfa.accepting
    return targets


def product_cube(sg: SymbolicGame, state: tuple[int, ...]) -> NodeRef:
    """Cube of a decoded (v[, z][, u]) tuple."""
    cube = sg.state_cube(state[0])
    rest = list(state[1:])
    if sg.y_vars:
        cube = cube & sg.dfa_cube(rest.pop(0))
    if sg.u_vars:
        cube = cube & sg.utility_cube(rest.pop(0))
    return cube


def extract_value(sg: SymbolicGame, layers: dict[int, NodeRef], state: tuple[int, ...]) -> Value:
    """Value of one product state, INFINITY when it lies in no layer."""
    cube = product_cube(sg, state)
    for v in sorted(layers):
        if layers[v] & cube != sg.manager.zero:
            return v
    return INFINITY


def forced(sg: SymbolicGame, omega: NodeRef, tv: TransitionVector) -> NodeRef:
    """(state, action) pairs of tv whose every valid human reply lands in omega."""
    m = sg.manager
    enabled = m.exists(sg.i_vars, tv.guard)
    pre = product_pre(sg, omega, tv)
    return enabled & m.forall(sg.i_vars, ~tv.guard | pre)


def iteration_cap(sg: SymbolicGame) -> int:
    vars_ = sg.x_vars + sg.y_vars + sg.u_vars
    return sg.manager.sat_count(sg.valid_product(), vars_) + 2


def _stats(sg: SymbolicGame, started: float, solution_roots: list[NodeRef]) -> dict:
    m = sg.manager
    return {
        "seconds": time.perf_counter() - started,
        "nodes": m.node_count(*solution_roots),
        "peak_nodes": m.stats()["peak_live_nodes"],
    }


def symbolic_vi_uniform(sg: SymbolicGame, tr: TransitionRelation, targets: NodeRef | None = None) -> SymbolicSolution:
    """Attractor for relations whose actions all share one positive cost."""
    m = sg.manager
    started = time.perf_counter()
    costs = tr.costs
    if len(costs) != 1 or costs[0] <= 0:
        raise ValueError(f"Uniform value iteration needs a single positive cost, got {costs}")
    step = costs[0]
    targets = product_targets(sg) if targets is None else targets
    cap = iteration_cap(sg)

    winning = targets
    layers = {0: targets}
    strategy = m.zero
    rounds = 0
    while True:
        if rounds >= cap:
            raise DivergenceError(f"Attractor did not settle within {cap} rounds")
        witnesses = m.zero
        for tv in tr:
            witnesses = witnesses | forced(sg, winning, tv)
        new = sg.valid_state & m.exists(sg.o_vars, witnesses) & ~winning
        if new == m.zero:
            break
        rounds += 1
        layers[rounds * step] = new
        strategy = strategy | m.pick_smallest(witnesses & new, sg.o_vars)
        winning = winning | new
        logger.debug(f"Attractor round {rounds}: {m.node_count(new)} nodes in the new layer")

    return SymbolicSolution(
        sg=sg,
        layers=layers,
        strategy=strategy,
        iterations=rounds + 1,
        stats=_stats(sg, started, [*layers.values(), strategy]),
    )


def symbolic_vi_weighted(sg: SymbolicGame, tr: TransitionRelation, targets: NodeRef | None = None) -> SymbolicSolution:
    """Layered value iteration for arbitrary non-negative costs."""
    m = sg.manager
    started = time.perf_counter()
    targets = product_targets(sg) if targets is None else targets
    cap = iteration_cap(sg)

    layers: dict[int, NodeRef] = {0: targets}
    strategy = m.zero
    rounds = 0
    while True:
        if rounds >= cap:
            raise DivergenceError(f"Value iteration did not settle within {cap} rounds")
        rounds += 1

        offers: dict[int, NodeRef] = {}
        cumulative = m.zero
        old_cumulative: dict[int, NodeRef] = {}
        for j in sorted(layers):
            cumulative = cumulative | layers[j]
            old_cumulative[j] = cumulative
            for tv in tr:
                witness = forced(sg, cumulative, tv)
                if witness != m.zero:
                    v = j + tv.cost
                    offers[v] = offers.get(v, m.zero) | witness

        new_layers: dict[int, NodeRef] = {}
        settled = m.zero
        previous_below = m.zero
        for v in sorted(set(layers) | set(offers)):
            if v in old_cumulative:
                previous_below = old_cumulative[v]
            witnesses = offers.get(v, m.zero)
            offered = sg.valid_state & m.exists(sg.o_vars, witnesses)
            layer = (layers.get(v, m.zero) | offered) & ~settled
            if layer == m.zero:
                continue
            new_layers[v] = layer
            settled = settled | layer
            improved = layer & ~previous_below
            if improved != m.zero:
                chosen = m.pick_smallest(witnesses & improved, sg.o_vars)
                strategy = (strategy & ~improved) | chosen

        if new_layers == layers:
            break
        layers = new_layers
        logger.debug(f"Value iteration round {rounds}: {len(layers)} layers")

    return SymbolicSolution(
        sg=sg,
        layers=layers,
        strategy=strategy,
        iterations=rounds,
        stats=_stats(sg, started, [*layers.values(), strategy]),
    )


def symbolic_vi(sg: SymbolicGame, tr: TransitionRelation, targets: NodeRef | None = None) -> SymbolicSolution:
    costs = tr.costs
    if len(costs) == 1 and costs[0] > 0:
        return symbolic_vi_uniform(sg, tr, targets)
    return symbolic_vi_weighted(sg, tr, targets)


def decode_strategy(sg: SymbolicGame, strategy: NodeRef, restrict: NodeRef | None = None) -> dict[tuple[int, ...], int]:
    """(v[, z][, u]) -> robot action id for every state the strategy covers."""
    m = sg.manager
    f = strategy if restrict is None else strategy & restrict
    state_vars = sg.x_vars + sg.y_vars + sg.u_vars
    decoded: dict[tuple[int, ...], int] = {}
    for assignment in m.sat_iter(f, state_vars + sg.o_vars):
        state = [sg.state_codec.inverse[read_code(assignment, sg.x_vars)]]
        for block in (sg.y_vars, sg.u_vars):
            if block:
                state.append(read_code(assignment, block))
        decoded[tuple(state)] = sg.robot_codec.inverse[read_code(assignment, sg.o_vars)]
    return decoded
