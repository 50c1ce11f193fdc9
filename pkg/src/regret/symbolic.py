"""
Symbolic regret pipeline.

Reachable (s, u) pairs and cooperative values stay symbolic; the best
alternatives are decoded and looped over explicitly; they seed a b block
whose codes enumerate the distinct ba values (and INFINITY). The final
min-max regret game is an ADD value iteration over (X, Y, U, b).
"""

import logging
import time
from dataclasses import dataclass, replace

from bidict import bidict

from src.ddlib import INFINITY, NodeRef, assign_code, code_bits, width_for
from src.ddlib.terminals import Value, is_finite
from src.domain.game import Game
from src.enums import ApplyOp, QuantifyMode, SolverKind
from src.exceptions import BitBudgetExceeded, DivergenceError
from src.ltlf.dfa import Dfa
from src.regret.best_response import RegretKey, RegretResult, leaf_regret
from src.regret.cooperative import best_alternates_symbolic, cooperative_values_symbolic, state_assignment
from src.regret.utility import SymbolicUtility, build_utility_symbolic
from src.solvers.product import initial_dfa_state
from src.solvers.symbolic import iteration_cap
from src.symgame import action_values
from src.symgame.relations import TransitionRelation

logger = logging.getLogger(__name__)

StateAlternates = dict[tuple[int, int, int], dict[int, Value]]


@dataclass
class BestResponseBlock:
    b_vars: list[int]
    codec: bidict
    tr: TransitionRelation

    def code(self, b: Value) -> int:
        return self.codec[b]

    def value(self, code: int) -> Value:
        return self.codec.inverse[code]


def build_best_response_symbolic(su: SymbolicUtility, ba: StateAlternates) -> BestResponseBlock:
    """Allocate the b block and attach b' = min(b, ba(X, Y, U, O)) to every vector."""
    sg = su.sg
    m = sg.manager
    distinct = sorted({b for row in ba.values() for b in row.values() if is_finite(b)})
    codec = bidict({b: k for k, b in enumerate([*distinct, INFINITY])})
    width = width_for(len(codec))
    cap = m.max_vars
    if cap is not None and m.var_count + width > cap:
        raise BitBudgetExceeded(f"b block needs {width} variables for {len(codec)} values, {cap - m.var_count} left")
    b_vars = [m.new_var(f"b{i}").var for i in range(width)]

    state_vars = sg.x_vars + sg.y_vars + sg.u_vars + sg.o_vars
    listed = m.zero
    rows: list[dict[tuple, int]] = [{} for _ in b_vars]
    for state, per_action in ba.items():
        for action, alternate in per_action.items():
            head = tuple(
                code_bits(sg.state_codec[state[0]], len(sg.x_vars))
                + code_bits(state[1], len(sg.y_vars))
                + code_bits(state[2], len(sg.u_vars))
                + code_bits(sg.robot_codec[action], len(sg.o_vars))
            )
            listed = listed | m.cube(state_vars, head)
            for b, code in codec.items():
                nxt = code_bits(codec[min(b, alternate)], width)
                for j, bit in enumerate(nxt):
                    if bit:
                        rows[j][head + tuple(code_bits(code, width))] = 1
    eta_b = [
        (listed & m.from_table(state_vars + b_vars, row, default=0)) | (~listed & m.var_ref(bv))
        for bv, row in zip(b_vars, rows)
    ]
    tr = TransitionRelation(
        kind=su.tr.kind,
        vectors=[replace(tv, extra=list(zip(b_vars, eta_b))) for tv in su.tr],
    )
    logger.info(f"b block: {len(codec)} values over {width} variables")
    return BestResponseBlock(b_vars=b_vars, codec=codec, tr=tr)


def leaf_regrets(su: SymbolicUtility, block: BestResponseBlock) -> NodeRef:
    """u - min(b, u) at leaves, INFINITY elsewhere."""
    sg = su.sg
    m = sg.manager
    u_width, b_width = len(sg.u_vars), len(block.b_vars)
    table = {
        tuple(code_bits(u, u_width) + code_bits(code, b_width)): leaf_regret(u, b)
        for u in range(su.budget + 1)
        for b, code in block.codec.items()
    }
    weights = m.from_table(sg.u_vars + block.b_vars, table, default=INFINITY)
    return m.ite(su.leaves, weights, m.infinity)


def regret_vi_symbolic(su: SymbolicUtility, block: BestResponseBlock) -> tuple[NodeRef, NodeRef, int]:
    """
    Min-max over the b-extended relation with leaves pinned to their
    regret. Returns (values, strategy over X, Y, U, b, O, rounds).
    """
    sg = su.sg
    m = sg.manager
    leaf = leaf_regrets(su, block)
    values = leaf
    strategy = m.zero
    cap = iteration_cap(sg) * len(block.codec)
    rounds = 0
    while True:
        if rounds >= cap:
            raise DivergenceError(f"Regret iteration did not settle within {cap} rounds")
        rounds += 1
        q = action_values(sg, values, block.tr, human=QuantifyMode.MAX_ABSTRACT, add_cost=False)
        best = m.ite(sg.valid_state, m.quantify(QuantifyMode.MIN_ABSTRACT, q, sg.o_vars), m.infinity)
        updated = m.ite(su.leaves, leaf, best)
        improved = m.apply(ApplyOp.LESS, updated, values)
        if improved != m.zero:
            achieving = m.apply(ApplyOp.EQUAL, q, updated) & improved
            chosen = m.pick_smallest(achieving, sg.o_vars)
            strategy = (strategy & ~improved) | chosen
        if updated == values:
            break
        values = updated
    logger.debug(f"Symbolic regret iteration settled after {rounds} rounds, {m.node_count(values)} nodes")
    return values, strategy, rounds


def _full_assignment(su: SymbolicUtility, block: BestResponseBlock, key: RegretKey, action: int | None = None):
    v, z, u, b = key
    assignment = state_assignment(su.sg, (v, z, u), action)
    assignment.update(assign_code(block.b_vars, block.code(b)))
    return assignment


def decode_regret_strategy(
    su: SymbolicUtility,
    block: BestResponseBlock,
    strategy: NodeRef,
    ba: StateAlternates,
    start: RegretKey,
) -> dict[RegretKey, int]:
    """Follow the strategy from start over every human reply and read off the chosen actions."""
    sg = su.sg
    m = sg.manager
    dfa = sg.sdfa.dfa
    agame = sg.agame
    decoded: dict[RegretKey, int] = {}
    stack = [start]
    seen = {start}
    while stack:
        key = stack.pop()
        v, z, u, b = key
        if dfa.is_accepting(z) or u > su.budget:
            continue
        actions = sorted({je.robot_action for je in agame.edges[v]})
        chosen = next((a for a in actions if m.eval(strategy, _full_assignment(su, block, key, a))), None)
        if chosen is None:
            continue
        decoded[key] = chosen
        b_next = min(b, ba[(v, z, u)][chosen])
        for je in agame.edges[v]:
            if je.robot_action != chosen:
                continue
            nxt = (je.target, dfa.step(z, agame.labels(je.target)), u + je.cost, b_next)
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return decoded


def solve_regret_symbolic(
    game: Game,
    dfa: Dfa,
    budget: int,
    solver: SolverKind = SolverKind.SYMBOLIC_MONOLITHIC,
    max_vars: int | None = None,
) -> RegretResult:
    phases: dict[str, float] = {}
    started = time.perf_counter()
    su = build_utility_symbolic(game, dfa, budget, solver=solver, max_vars=max_vars)
    phases["utility"] = time.perf_counter() - started

    started = time.perf_counter()
    cval, coop_rounds = cooperative_values_symbolic(su)
    ba = best_alternates_symbolic(su, cval)
    phases["alternates"] = time.perf_counter() - started

    started = time.perf_counter()
    block = build_best_response_symbolic(su, ba)
    values, strategy, rounds = regret_vi_symbolic(su, block)
    phases["regret"] = time.perf_counter() - started

    m = su.sg.manager
    start: RegretKey = (game.initial, initial_dfa_state(game, dfa), 0, INFINITY)
    regret = m.eval(values, _full_assignment(su, block, start))
    feasible = is_finite(regret)
    decoded = decode_regret_strategy(su, block, strategy, ba, start) if feasible else {}
    logger.info(f"Symbolic regret pipeline: reg* = {regret}, feasible {feasible}, {len(decoded)} strategy entries")
    return RegretResult(
        budget=budget,
        feasible=feasible,
        regret=regret,
        strategy=decoded,
        initial=start,
        diagram=strategy,
        stats={
            "reachable_pairs": m.sat_count(su.reach, su.sg.x_vars + su.sg.y_vars + su.sg.u_vars),
            "ba_values": len(block.codec),
            "cooperative_rounds": coop_rounds,
            "regret_rounds": rounds,
            "phase_seconds": phases,
            "peak_nodes": m.stats()["peak_live_nodes"],
            "vars": {**su.sg.var_counts(), "b": len(block.b_vars)},
        },
    )
