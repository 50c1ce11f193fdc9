"""
Boolean encoding of a DFA inside a decision-diagram manager.

State z is stored in the Y block as its binary code, most significant bit
first. Each atom p is realised over the game's state bits by a label
predicate lab_p(X).
"""

import logging
from dataclasses import dataclass
from typing import Mapping, Sequence

from src.ddlib import Manager, NodeRef, assign_code, code_bits, read_code, width_for
from src.exceptions import BitBudgetExceeded, UndeclaredAtomError
from src.ltlf.dfa import Dfa

logger = logging.getLogger(__name__)


@dataclass
class SymbolicDfa:
    dfa: Dfa
    manager: Manager
    y_vars: list[int]
    zeta: list[NodeRef]
    accepting: NodeRef
    labeling: dict[str, NodeRef]

    @property
    def initial_code(self) -> int:
        return self.dfa.initial

    def state_cube(self, z: int) -> NodeRef:
        return self.manager.cube(self.y_vars, code_bits(z, len(self.y_vars)))

    def valid(self) -> NodeRef:
        """Codes that name a real DFA state."""
        result = self.manager.zero
        for z in range(self.dfa.num_states):
            result = result | self.state_cube(z)
        return result

    def substitution(self) -> list[tuple[int, NodeRef]]:
        return list(zip(self.y_vars, self.zeta))

    def successor(self, code: int, x_assignment: Mapping[int, bool]) -> int:
        """Code reached from `code` when the game sits in the encoded X state."""
        assignment = dict(x_assignment)
        assignment.update(assign_code(self.y_vars, code))
        next_bits = {
            y: bool(self.manager.eval(fn, assignment)) for y, fn in zip(self.y_vars, self.zeta)
        }
        return read_code(next_bits, self.y_vars)

    def is_accepting_code(self, code: int) -> bool:
        return bool(self.manager.eval(self.accepting, assign_code(self.y_vars, code)))


def allocate_y_block(manager: Manager, dfa: Dfa, prefix: str = "y") -> list[int]:
    width = width_for(dfa.num_states)
    return [manager.new_var(f"{prefix}{i}").var for i in range(width)]


def _guard(manager: Manager, dfa: Dfa, letter_index: int, labeling: Mapping[str, NodeRef]) -> NodeRef:
    guard = manager.one
    for i, atom in enumerate(dfa.atoms):
        lab = labeling[atom]
        guard = guard & (lab if (letter_index >> i) & 1 else ~lab)
    return guard


def encode_symbolic(
    dfa: Dfa,
    labeling: Mapping[str, NodeRef],
    manager: Manager,
    y_vars: Sequence[int] | None = None,
) -> SymbolicDfa:
    """Build zeta_{y_i}(X, Y) and the accepting function F(Y)."""
    missing = sorted(set(dfa.atoms) - set(labeling))
    if missing:
        raise UndeclaredAtomError(f"No label predicate for atoms {missing}")
    if y_vars is None:
        y_vars = allocate_y_block(manager, dfa)
    y_vars = list(y_vars)
    if (1 << len(y_vars)) < dfa.num_states:
        raise BitBudgetExceeded(
            f"{dfa.num_states} DFA states do not fit in {len(y_vars)} Y bits"
        )

    guards = [_guard(manager, dfa, k, labeling) for k in range(dfa.num_letters)]
    zeta = [manager.zero for _ in y_vars]
    for z in range(dfa.num_states):
        here = manager.cube(y_vars, code_bits(z, len(y_vars)))
        by_target: dict[int, NodeRef] = {}
        for k, dst in enumerate(dfa.transitions[z]):
            by_target[dst] = by_target.get(dst, manager.zero) | guards[k]
        for dst, guard in by_target.items():
            edge = here & guard
            for i, bit in enumerate(code_bits(dst, len(y_vars))):
                if bit:
                    zeta[i] = zeta[i] | edge

    accepting = manager.zero
    for z in sorted(dfa.accepting):
        accepting = accepting | manager.cube(y_vars, code_bits(z, len(y_vars)))

    logger.debug(
        f"Encoded DFA with {dfa.num_states} states into {len(y_vars)} Y bits, "
        f"{manager.node_count(*zeta, accepting)} nodes"
    )
    return SymbolicDfa(
        dfa=dfa,
        manager=manager,
        y_vars=y_vars,
        zeta=zeta,
        accepting=accepting,
        labeling=dict(labeling),
    )
