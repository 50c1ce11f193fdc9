"""
Play a fixed robot strategy against a chosen human policy on an explicit
arena. Arena keys are (player, vertex, dfa state, ...) tuples, so the same
walk serves the product game and the regret graphs.
"""

import logging
import random
from dataclasses import dataclass, field
from typing import Sequence

from src.ddlib.terminals import Value
from src.domain.game import Edge
from src.enums import HumanPolicyKind
from src.exceptions import StrategyMismatchError, StrategyUndefinedError
from src.solvers.explicit import strategy_values
from src.solvers.product import Arena

logger = logging.getLogger(__name__)


@dataclass
class PlayStep:
    state: int
    action: int
    human_action: int
    cost: int
    target: int


@dataclass
class Play:
    steps: list[PlayStep] = field(default_factory=list)
    payoff: int = 0
    accepted: bool = False
    final: int = 0

    @property
    def robot_actions(self) -> list[int]:
        return [step.action for step in self.steps]


@dataclass
class HumanPolicy:
    kind: HumanPolicyKind
    seed: int | None = None
    script: Sequence[int] = ()

    @classmethod
    def adversarial(cls) -> "HumanPolicy":
        return cls(HumanPolicyKind.ADVERSARIAL)

    @classmethod
    def cooperative(cls) -> "HumanPolicy":
        return cls(HumanPolicyKind.COOPERATIVE)

    @classmethod
    def random(cls, seed: int = 0) -> "HumanPolicy":
        return cls(HumanPolicyKind.RANDOM, seed=seed)

    @classmethod
    def scripted(cls, script: Sequence[int]) -> "HumanPolicy":
        return cls(HumanPolicyKind.SCRIPTED, script=tuple(script))


class _Chooser:
    """Stateful reply picker for one play."""

    def __init__(self, arena: Arena, strategy: dict[int, int], policy: HumanPolicy):
        self.policy = policy
        self.rng = random.Random(policy.seed)
        self.cursor = 0
        self.scores: list[Value] | None = None
        if policy.kind in (HumanPolicyKind.ADVERSARIAL, HumanPolicyKind.COOPERATIVE):
            worst, best = strategy_values(arena, strategy)
            self.scores = worst if policy.kind == HumanPolicyKind.ADVERSARIAL else best

    def choose(self, replies: list[Edge]) -> Edge:
        kind = self.policy.kind
        ordered = sorted(replies, key=lambda e: e.action)
        if kind == HumanPolicyKind.ADVERSARIAL:
            return max(ordered, key=lambda e: self.scores[e.target])
        if kind == HumanPolicyKind.COOPERATIVE:
            return min(ordered, key=lambda e: self.scores[e.target])
        if kind == HumanPolicyKind.RANDOM:
            return self.rng.choice(ordered)
        wanted = self.policy.script[self.cursor] if self.cursor < len(self.policy.script) else 0
        self.cursor += 1
        for e in ordered:
            if e.action == wanted:
                return e
        raise StrategyMismatchError(f"Scripted human action {wanted} is not enabled at step {self.cursor}")


def rollout(
    arena: Arena,
    strategy: dict[int, int],
    policy: HumanPolicy,
    max_steps: int | None = None,
) -> Play:
    """
    Alternate robot and human moves from the initial state until an
    accepting state, a sink or max_steps robot moves. Payoff is the summed
    robot cost.
    """
    limit = max_steps if max_steps is not None else len(arena) + 1
    chooser = _Chooser(arena, strategy, policy)
    play = Play()
    s = arena.initial
    while s not in arena.accepting and s not in arena.sinks and len(play.steps) < limit:
        if s not in strategy:
            raise StrategyUndefinedError(f"No strategy entry for state {arena.keys[s]}")
        action = strategy[s]
        move = next((e for e in arena.edges[s] if e.action == action), None)
        if move is None:
            raise StrategyMismatchError(f"Action {action} is not enabled at {arena.keys[s]}")
        play.payoff += move.cost
        if move.target in arena.sinks:
            play.steps.append(PlayStep(state=s, action=action, human_action=0, cost=move.cost, target=move.target))
            s = move.target
            break
        reply = chooser.choose(arena.edges[move.target])
        play.steps.append(
            PlayStep(state=s, action=action, human_action=reply.action, cost=move.cost, target=reply.target)
        )
        s = reply.target
    play.final = s
    play.accepted = s in arena.accepting
    logger.debug(f"{policy.kind.value} rollout: {len(play.steps)} steps, payoff {play.payoff}, ok {play.accepted}")
    return play
