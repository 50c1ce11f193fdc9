"""
Boolean encoding of the human-abstracted game.

Variable blocks are allocated once, in the order X (robot states), Y (DFA
states), U (utility counter), O (robot actions), I (human actions) and then
the primed copies X', Y', U' used only by forward reachability. Human action
code 0 is always the no-op.
"""

import logging
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from bidict import bidict

from src.config.settings import get_settings
from src.ddlib import Manager, NodeRef, code_bits, read_code, width_for
from src.domain.game import AbstractedGame
from src.exceptions import BitBudgetExceeded
from src.ltlf.dfa import Dfa
from src.ltlf.symbolic import SymbolicDfa, encode_symbolic

logger = logging.getLogger(__name__)


@dataclass
class SymbolicGame:
    manager: Manager
    agame: AbstractedGame
    x_vars: list[int]
    o_vars: list[int]
    i_vars: list[int]
    state_codec: bidict
    robot_codec: bidict
    human_codec: bidict
    eta: list[NodeRef]
    valid: NodeRef
    valid_state: NodeRef
    valid_robot: NodeRef
    labeling: dict[str, NodeRef]
    costs: dict[int, int]
    y_vars: list[int] = field(default_factory=list)
    u_vars: list[int] = field(default_factory=list)
    xp_vars: list[int] = field(default_factory=list)
    yp_vars: list[int] = field(default_factory=list)
    up_vars: list[int] = field(default_factory=list)
    sdfa: SymbolicDfa | None = None
    budget: int | None = None

    # ----------------------
    # Codes
    # ----------------------
    def state_cube(self, v: int) -> NodeRef:
        return self.manager.cube(self.x_vars, code_bits(self.state_codec[v], len(self.x_vars)))

    def robot_cube(self, a: int) -> NodeRef:
        return self.manager.cube(self.o_vars, code_bits(self.robot_codec[a], len(self.o_vars)))

    def human_cube(self, a: int) -> NodeRef:
        return self.manager.cube(self.i_vars, code_bits(self.human_codec[a], len(self.i_vars)))

    def dfa_cube(self, z: int) -> NodeRef:
        return self.manager.cube(self.y_vars, code_bits(z, len(self.y_vars)))

    def utility_cube(self, u: int) -> NodeRef:
        return self.manager.cube(self.u_vars, code_bits(u, len(self.u_vars)))

    @property
    def overshoot(self) -> int:
        """Utility code of the budget-overshoot sink."""
        if self.budget is None:
            raise ValueError("Game was encoded without a utility block")
        return self.budget + 1

    def valid_dfa(self) -> NodeRef:
        return self.sdfa.valid() if self.sdfa is not None else self.manager.one

    def valid_utility(self) -> NodeRef:
        if not self.u_vars:
            return self.manager.one
        result = self.manager.zero
        for u in range(self.overshoot + 1):
            result = result | self.utility_cube(u)
        return result

    def valid_product(self) -> NodeRef:
        return self.valid_state & self.valid_dfa() & self.valid_utility()

    def cost_of(self, a: int) -> int:
        return self.costs[a]

    # ----------------------
    # Decoding
    # ----------------------
    def decode_state(self, assignment) -> int:
        return self.state_codec.inverse[read_code(assignment, self.x_vars)]

    def iter_product_states(self, f: NodeRef) -> Iterator[tuple[int, ...]]:
        """Decoded (v[, z][, u]) tuples of a set over the state blocks."""
        blocks = [self.x_vars] + [b for b in (self.y_vars, self.u_vars) if b]
        vars_ = [v for b in blocks for v in b]
        for assignment in self.manager.sat_iter(f, vars_):
            x_code = read_code(assignment, self.x_vars)
            if x_code not in self.state_codec.inverse:
                raise ValueError(f"Set contains non-state X code {x_code}")
            decoded = [self.state_codec.inverse[x_code]]
            decoded += [read_code(assignment, b) for b in blocks[1:]]
            yield tuple(decoded)

    def decode_states(self, f: NodeRef) -> set[int]:
        """Robot states of a set over X only."""
        return {self.state_codec.inverse[read_code(a, self.x_vars)] for a in self.manager.sat_iter(f, self.x_vars)}

    def decode_edges(self, f: NodeRef) -> set[tuple[int, int, int]]:
        """(state, robot action, human action) triples of a set over X, O, I."""
        vars_ = self.x_vars + self.o_vars + self.i_vars
        return {
            (
                self.state_codec.inverse[read_code(a, self.x_vars)],
                self.robot_codec.inverse[read_code(a, self.o_vars)],
                self.human_codec.inverse[read_code(a, self.i_vars)],
            )
            for a in self.manager.sat_iter(f, vars_)
        }

    def var_counts(self) -> dict[str, int]:
        return {
            "X": len(self.x_vars),
            "Y": len(self.y_vars),
            "U": len(self.u_vars),
            "O": len(self.o_vars),
            "I": len(self.i_vars),
            "primed": len(self.xp_vars) + len(self.yp_vars) + len(self.up_vars),
            "total": self.manager.var_count,
        }


def _block(manager: Manager, prefix: str, width: int) -> list[int]:
    return [manager.new_var(f"{prefix}{i}").var for i in range(width)]


def _set_over(manager: Manager, vars_: Sequence[int], codes: Iterable[int]) -> NodeRef:
    width = len(vars_)
    return manager.from_table(vars_, {code_bits(c, width): 1 for c in codes}, default=0)


def encode(
    agame: AbstractedGame,
    dfa: Dfa | None = None,
    budget: int | None = None,
    manager: Manager | None = None,
    max_vars: int | None = None,
) -> SymbolicGame:
    """Allocate every block and build eta, the validity guards and the label predicates."""
    cap = max_vars if max_vars is not None else get_settings().max_vars
    task = agame.game.task
    n_states = len(agame.states)
    n_robot = max(1, len(task.robot_actions))
    n_human = len(task.human_actions) + 1

    widths = {
        "x": width_for(n_states),
        "y": width_for(dfa.num_states) if dfa is not None else 0,
        "u": width_for(budget + 2) if budget is not None else 0,
        "o": width_for(n_robot),
        "i": width_for(n_human),
    }
    needed = 2 * widths["x"] + 2 * widths["y"] + 2 * widths["u"] + widths["o"] + widths["i"]
    if manager is None:
        manager = Manager(max_vars=cap)
    if manager.var_count + needed > (manager.max_vars or cap):
        raise BitBudgetExceeded(
            f"Encoding needs {needed} variables {widths}, budget is {manager.max_vars or cap}"
        )

    x_vars = _block(manager, "x", widths["x"])
    y_vars = _block(manager, "y", widths["y"])
    u_vars = _block(manager, "u", widths["u"])
    o_vars = _block(manager, "o", widths["o"])
    i_vars = _block(manager, "i", widths["i"])
    xp_vars = _block(manager, "xp", widths["x"])
    yp_vars = _block(manager, "yp", widths["y"])
    up_vars = _block(manager, "up", widths["u"])

    state_codec = bidict({v: code for code, v in enumerate(agame.states)})
    robot_codec = bidict({a: a for a in range(len(task.robot_actions))})
    human_codec = bidict({a: a for a in range(n_human)})

    x_width = widths["x"]
    edge_vars = x_vars + o_vars + i_vars
    valid_rows: dict[tuple, int] = {}
    bit_rows: list[dict[tuple, int]] = [{} for _ in x_vars]
    for v in agame.states:
        for e in agame.edges[v]:
            key = (
                code_bits(state_codec[v], x_width)
                + code_bits(robot_codec[e.robot_action], len(o_vars))
                + code_bits(human_codec[e.human_action], len(i_vars))
            )
            valid_rows[key] = 1
            for i, bit in enumerate(code_bits(state_codec[e.target], x_width)):
                if bit:
                    bit_rows[i][key] = 1

    valid = manager.from_table(edge_vars, valid_rows, default=0)
    eta = [manager.from_table(edge_vars, rows, default=0) for rows in bit_rows]
    valid_state = _set_over(manager, x_vars, range(n_states))
    valid_robot = manager.exists(i_vars, valid)

    labeling: dict[str, NodeRef] = {}
    for p in task.propositions:
        codes = [state_codec[v] for v in agame.states if p in agame.labels(v)]
        labeling[p] = _set_over(manager, x_vars, codes)

    sg = SymbolicGame(
        manager=manager,
        agame=agame,
        x_vars=x_vars,
        o_vars=o_vars,
        i_vars=i_vars,
        state_codec=state_codec,
        robot_codec=robot_codec,
        human_codec=human_codec,
        eta=eta,
        valid=valid,
        valid_state=valid_state,
        valid_robot=valid_robot,
        labeling=labeling,
        costs={a: act.cost for a, act in enumerate(task.robot_actions)},
        y_vars=y_vars,
        u_vars=u_vars,
        xp_vars=xp_vars,
        yp_vars=yp_vars,
        up_vars=up_vars,
        budget=budget,
    )
    if dfa is not None:
        for atom in dfa.atoms:
            labeling.setdefault(atom, manager.zero)
        sg.sdfa = encode_symbolic(dfa, labeling, manager, y_vars)

    logger.info(f"Encoded game: blocks {sg.var_counts()}, {manager.node_count(*eta, valid)} nodes in eta")
    return sg
