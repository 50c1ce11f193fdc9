"""
Grounded STRIPS model shared by the JSON and PDDL front ends.

Facts are strings such as ``at(box,l0)``, ``holding(box)`` or ``handempty``.
"""

import math
import re
from dataclasses import dataclass, field
from typing import AbstractSet

from src.enums import Region

_FACT = re.compile(r"^(?P<pred>[^()]+)(?:\((?P<args>[^()]*)\))?$")

_UNSAFE = re.compile(r"[^A-Za-z0-9_,]")

NOOP = "noop"


def fact(pred: str, *args: str) -> str:
    return f"{pred}({','.join(args)})" if args else pred


def split_fact(text: str) -> tuple[str, tuple[str, ...]]:
    m = _FACT.match(text)
    if not m:
        raise ValueError(f"Malformed fact {text!r}")
    args = m.group("args")
    return m.group("pred"), tuple(a for a in args.split(",") if a) if args else ()


def fact_label(text: str) -> str:
    """Proposition name of a fact: at(o,l) is p_o,l; other facts are pred_args."""
    pred, args = split_fact(text)
    if pred == "at" and len(args) == 2:
        label = f"p_{args[0]},{args[1]}"
    else:
        label = "_".join((pred, ",".join(args))) if args else pred
    return _UNSAFE.sub("_", label)


@dataclass(frozen=True)
class GroundAction:
    schema: str
    args: tuple[str, ...]
    pre: frozenset[str]
    add: frozenset[str]
    delete: frozenset[str]
    cost: int = 0

    @property
    def name(self) -> str:
        return f"{self.schema}({','.join(self.args)})"

    def applicable(self, state: AbstractSet[str]) -> bool:
        return self.pre <= state

    def apply(self, state: frozenset[str]) -> frozenset[str]:
        return (state - self.delete) | self.add


@dataclass
class StripsTask:
    """Facts, initial state and the two players' grounded actions."""

    name: str
    init: frozenset[str]
    goal: frozenset[str]
    robot_actions: list[GroundAction]
    human_actions: list[GroundAction]
    objects: tuple[str, ...] = ()
    locations: tuple[str, ...] = ()
    regions: dict[str, Region] = field(default_factory=dict)
    movable: tuple[str, ...] = ()
    facts: frozenset[str] = frozenset()

    def __post_init__(self):
        if not self.facts:
            found = set(self.init) | set(self.goal)
            for a in self.robot_actions + self.human_actions:
                found |= a.pre | a.add | a.delete
            self.facts = frozenset(found)

    @property
    def propositions(self) -> list[str]:
        return sorted({fact_label(f) for f in self.facts})

    def labels(self, state: AbstractSet[str]) -> frozenset[str]:
        return frozenset(fact_label(f) for f in state)

    def human_action_names(self) -> list[str]:
        """Human action ids: 0 is the no-op, k is human_actions[k - 1]."""
        return [NOOP] + [a.name for a in self.human_actions]

    def robot_action_names(self) -> list[str]:
        return [a.name for a in self.robot_actions]

    def goal_atoms(self) -> list[str]:
        return sorted(fact_label(f) for f in self.goal)

    def cost_classes(self) -> list[int]:
        return sorted({a.cost for a in self.robot_actions})

    def estimate_state_count(self) -> int:
        """Rough upper bound on game vertices (both players)."""
        if self.locations and self.movable:
            n_loc, n_mov = len(self.locations), len(self.movable)
            robot = n_loc**n_mov + n_mov * n_loc ** (n_mov - 1)
            return 2 * robot
        return 2 * int(math.pow(2, min(len(self.facts), 60)))


def goal_formula(task: StripsTask) -> str:
    """F of the conjunction of the goal atoms; `true` when there is no goal."""
    atoms = task.goal_atoms()
    if not atoms:
        return "true"
    return f"F({' & '.join(atoms)})"
