"""
Explicit two-player game over a grounded STRIPS task, and its
human-abstracted form in which only robot-turn states remain.
"""

import logging
from collections import deque
from dataclasses import dataclass, field

import humanize

from src.config.settings import get_settings
from src.domain.strips import StripsTask
from src.enums import Player
from src.exceptions import StateCapExceeded

logger = logging.getLogger(__name__)

Vertex = tuple[Player, frozenset[str]]


@dataclass(frozen=True)
class Edge:
    action: int
    cost: int
    target: int


@dataclass
class Game:
    """
    Alternating game. Vertex ids index `vertices`; robot action ids index
    `task.robot_actions`; human action 0 is the no-op and k > 0 is
    `task.human_actions[k - 1]`.
    """

    task: StripsTask
    vertices: list[Vertex]
    edges: list[list[Edge]]
    initial: int = 0
    index: dict[Vertex, int] = field(default_factory=dict)

    def player(self, v: int) -> Player:
        return self.vertices[v][0]

    def facts(self, v: int) -> frozenset[str]:
        return self.vertices[v][1]

    def labels(self, v: int) -> frozenset[str]:
        return self.task.labels(self.facts(v))

    def robot_vertices(self) -> list[int]:
        return [v for v, (p, _) in enumerate(self.vertices) if p == Player.ROBOT]

    def human_vertices(self) -> list[int]:
        return [v for v, (p, _) in enumerate(self.vertices) if p == Player.HUMAN]

    def action_name(self, v: int, action: int) -> str:
        if self.player(v) == Player.ROBOT:
            return self.task.robot_actions[action].name
        return self.task.human_action_names()[action]

    def state_text(self, v: int) -> str:
        return ",".join(sorted(self.facts(v)))

    @property
    def num_edges(self) -> int:
        return sum(len(out) for out in self.edges)


@dataclass(frozen=True)
class JointEdge:
    robot_action: int
    human_action: int
    cost: int
    target: int


@dataclass
class AbstractedGame:
    """Robot-turn states only; one joint edge per (robot action, human reply)."""

    game: Game
    states: list[int]
    edges: dict[int, list[JointEdge]]

    @property
    def initial(self) -> int:
        return self.game.initial

    @property
    def num_edges(self) -> int:
        return sum(len(out) for out in self.edges.values())

    def labels(self, v: int) -> frozenset[str]:
        return self.game.labels(v)


def build_game(task: StripsTask, max_states: int | None = None) -> Game:
    """Reachable alternating game from the task's initial state."""
    cap = max_states if max_states is not None else get_settings().max_states
    v0: Vertex = (Player.ROBOT, task.init)
    vertices: list[Vertex] = [v0]
    index: dict[Vertex, int] = {v0: 0}
    edges: list[list[Edge]] = []
    queue = deque([0])

    def visit(vertex: Vertex) -> int:
        if vertex not in index:
            if len(vertices) >= cap:
                estimate = task.estimate_state_count()
                raise StateCapExceeded(
                    f"Game exceeds {humanize.intcomma(cap)} states "
                    f"(estimated {humanize.intcomma(estimate)})",
                    count_estimate=estimate,
                )
            index[vertex] = len(vertices)
            vertices.append(vertex)
            edges.append([])
            queue.append(index[vertex])
        return index[vertex]

    edges.append([])
    while queue:
        v = queue.popleft()
        player, state = vertices[v]
        out: list[Edge] = []
        if player == Player.ROBOT:
            for a, action in enumerate(task.robot_actions):
                if action.applicable(state):
                    target = visit((Player.HUMAN, action.apply(state)))
                    out.append(Edge(action=a, cost=action.cost, target=target))
        else:
            out.append(Edge(action=0, cost=0, target=visit((Player.ROBOT, state))))
            for k, action in enumerate(task.human_actions, start=1):
                if action.applicable(state):
                    target = visit((Player.ROBOT, action.apply(state)))
                    out.append(Edge(action=k, cost=0, target=target))
        edges[v] = out

    game = Game(task=task, vertices=vertices, edges=edges, initial=0, index=index)
    logger.info(
        f"Built game '{task.name}': {humanize.intcomma(len(game.robot_vertices()))} robot states, "
        f"{humanize.intcomma(len(game.human_vertices()))} human states, "
        f"{humanize.intcomma(game.num_edges)} edges"
    )
    return game


def abstract(game: Game) -> AbstractedGame:
    """Fold every human state into the robot edges that lead to it."""
    states = game.robot_vertices()
    joint: dict[int, list[JointEdge]] = {}
    for v in states:
        out = []
        for e in game.edges[v]:
            for reply in game.edges[e.target]:
                out.append(
                    JointEdge(
                        robot_action=e.action,
                        human_action=reply.action,
                        cost=e.cost,
                        target=reply.target,
                    )
                )
        joint[v] = out
    return AbstractedGame(game=game, states=states, edges=joint)
