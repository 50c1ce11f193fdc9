"""
Explicit DFA over the alphabet 2^AP(phi), built by crawling the progression
closure of the formula and minimized by partition refinement.
"""

import json
import logging
from dataclasses import dataclass, field
from typing import AbstractSet, Callable, Collection, Hashable, Sequence

import graphviz as gv

from src.config.settings import get_settings
from src.exceptions import AtomCapExceeded
from src.ltlf.formula import Formula, atoms, nnf, to_text
from src.ltlf.semantics import dnf_final, from_dnf, progress_dnf, to_dnf

logger = logging.getLogger(__name__)


@dataclass
class Dfa:
    """
    Total deterministic automaton.

    `transitions[z][k]` is the successor of state z on letter number k, where
    bit i of k (least significant first) says whether atoms[i] holds.
    """

    atoms: tuple[str, ...]
    transitions: list[list[int]]
    initial: int
    accepting: frozenset[int]
    state_labels: list[str] = field(default_factory=list)

    @property
    def num_states(self) -> int:
        return len(self.transitions)

    @property
    def num_letters(self) -> int:
        return 1 << len(self.atoms)

    def letter(self, index: int) -> frozenset[str]:
        return frozenset(a for i, a in enumerate(self.atoms) if (index >> i) & 1)

    def letter_index(self, label: AbstractSet[str]) -> int:
        """Index of a label; propositions outside the alphabet are ignored."""
        return sum(1 << i for i, a in enumerate(self.atoms) if a in label)

    def step(self, state: int, label: AbstractSet[str]) -> int:
        return self.transitions[state][self.letter_index(label)]

    def run(self, trace: Sequence[Collection[str]], state: int | None = None) -> int:
        z = self.initial if state is None else state
        for label in trace:
            z = self.step(z, frozenset(label))
        return z

    def accepts(self, trace: Sequence[Collection[str]]) -> bool:
        return self.run(trace) in self.accepting

    def is_accepting(self, state: int) -> bool:
        return state in self.accepting

    # ----------------------
    # Export
    # ----------------------
    def guard_text(self, letter_index: int) -> str:
        if not self.atoms:
            return "true"
        return " & ".join(
            a if (letter_index >> i) & 1 else f"!{a}" for i, a in enumerate(self.atoms)
        )

    def to_dict(self) -> dict:
        return {
            "atoms": list(self.atoms),
            "num_states": self.num_states,
            "initial": self.initial,
            "accepting": sorted(self.accepting),
            "transitions": [list(row) for row in self.transitions],
            "state_labels": list(self.state_labels),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> "Dfa":
        return cls(
            atoms=tuple(data["atoms"]),
            transitions=[list(row) for row in data["transitions"]],
            initial=data["initial"],
            accepting=frozenset(data["accepting"]),
            state_labels=list(data.get("state_labels", [])),
        )

    def to_dot(self, name: str = "dfa") -> str:
        dot = gv.Digraph(name=name)
        dot.attr(rankdir="LR")
        dot.node("__start", label="", shape="none")
        for z in range(self.num_states):
            shape = "doublecircle" if z in self.accepting else "circle"
            tooltip = self.state_labels[z] if z < len(self.state_labels) else ""
            dot.node(f"z{z}", label=str(z), shape=shape, tooltip=tooltip)
        dot.edge("__start", f"z{self.initial}")
        for z, row in enumerate(self.transitions):
            grouped: dict[int, list[int]] = {}
            for k, dst in enumerate(row):
                grouped.setdefault(dst, []).append(k)
            for dst, letters in sorted(grouped.items()):
                if len(letters) == self.num_letters:
                    label = "true"
                else:
                    label = " | ".join(f"({self.guard_text(k)})" for k in letters)
                dot.edge(f"z{z}", f"z{dst}", label=label)
        return dot.source


def _crawl(
    num_letters: int,
    initial: Hashable,
    final: Callable[[Hashable], bool],
    follow: Callable[[Hashable, int], Hashable],
) -> tuple[list, list[list[int]], set[int]]:
    """Breadth-first exploration of every state reachable from initial."""
    states = [initial]
    index = {initial: 0}
    transitions: list[list[int]] = []
    accepting: set[int] = set()
    i = 0
    while i < len(states):
        state = states[i]
        if final(state):
            accepting.add(i)
        row = []
        for k in range(num_letters):
            nxt = follow(state, k)
            if nxt not in index:
                index[nxt] = len(states)
                states.append(nxt)
            row.append(index[nxt])
        transitions.append(row)
        i += 1
    return states, transitions, accepting


def minimize(dfa: Dfa) -> Dfa:
    """
    Moore partition refinement. Blocks are numbered by their smallest member,
    so the block of the initial state is 0 whenever the initial state is 0.
    """
    n = dfa.num_states
    block = [1 if z in dfa.accepting else 0 for z in range(n)]
    while True:
        signatures = [
            (block[z], tuple(block[dst] for dst in dfa.transitions[z])) for z in range(n)
        ]
        numbering: dict[tuple, int] = {}
        refined = []
        for z in range(n):
            if signatures[z] not in numbering:
                numbering[signatures[z]] = len(numbering)
            refined.append(numbering[signatures[z]])
        stable = len(numbering) == len(set(block))
        block = refined
        if stable:
            break

    representative: dict[int, int] = {}
    for z in range(n):
        representative.setdefault(block[z], z)
    transitions = [
        [block[dst] for dst in dfa.transitions[representative[b]]]
        for b in range(len(representative))
    ]
    labels = [
        dfa.state_labels[representative[b]] if dfa.state_labels else ""
        for b in range(len(representative))
    ]
    return Dfa(
        atoms=dfa.atoms,
        transitions=transitions,
        initial=block[dfa.initial],
        accepting=frozenset(block[z] for z in dfa.accepting),
        state_labels=labels,
    )


def to_dfa(formula: Formula, atom_cap: int | None = None) -> Dfa:
    """Minimized DFA accepting exactly the finite traces that satisfy formula."""
    cap = atom_cap if atom_cap is not None else get_settings().atom_cap
    alphabet = tuple(sorted(atoms(formula)))
    if len(alphabet) > cap:
        raise AtomCapExceeded(f"Formula has {len(alphabet)} atoms, cap is {cap}")

    letters = [
        frozenset(a for i, a in enumerate(alphabet) if (k >> i) & 1)
        for k in range(1 << len(alphabet))
    ]
    states, transitions, accepting = _crawl(
        len(letters),
        to_dnf(nnf(formula)),
        dnf_final,
        lambda d, k: progress_dnf(d, letters[k]),
    )
    raw = Dfa(
        atoms=alphabet,
        transitions=transitions,
        initial=0,
        accepting=frozenset(accepting),
        state_labels=[to_text(from_dnf(d)) for d in states],
    )
    dfa = minimize(raw)
    logger.info(
        f"DFA for {to_text(formula)}: {raw.num_states} progression states, "
        f"{dfa.num_states} after minimization, {len(dfa.accepting)} accepting"
    )
    return dfa
