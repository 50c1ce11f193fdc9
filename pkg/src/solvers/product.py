"""
Explicit arenas: the DFA-game product and, through the same structure, the
utility and best-response graphs built by the regret pipeline.
"""

import logging
from dataclasses import dataclass, field
from typing import Hashable

import humanize

from src.config.settings import get_settings
from src.ddlib.terminals import Value
from src.domain.game import Edge, Game
from src.enums import Player
from src.exceptions import StateCapExceeded
from src.ltlf.dfa import Dfa

logger = logging.getLogger(__name__)


@dataclass
class Arena:
    """
    Turn-based arena with integer edge costs. Accepting states end a play;
    `leaf` gives their terminal payoff (0 when absent). `sinks` are losing.
    """

    keys: list[Hashable] = field(default_factory=list)
    players: list[Player] = field(default_factory=list)
    edges: list[list[Edge]] = field(default_factory=list)
    initial: int = 0
    accepting: set[int] = field(default_factory=set)
    leaf: dict[int, Value] = field(default_factory=dict)
    sinks: set[int] = field(default_factory=set)
    index: dict[Hashable, int] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.keys)

    def add_state(self, key: Hashable, player: Player) -> tuple[int, bool]:
        """Id of key, adding it when new. The flag tells whether it was added."""
        if key in self.index:
            return self.index[key], False
        sid = len(self.keys)
        self.keys.append(key)
        self.players.append(player)
        self.edges.append([])
        self.index[key] = sid
        return sid, True

    def player(self, s: int) -> Player:
        return self.players[s]

    def is_accepting(self, s: int) -> bool:
        return s in self.accepting

    def robot_states(self) -> list[int]:
        return [s for s, p in enumerate(self.players) if p == Player.ROBOT]

    @property
    def num_edges(self) -> int:
        return sum(len(out) for out in self.edges)


@dataclass
class ProductGame(Arena):
    """
    States are (player, game vertex, dfa state). A robot move keeps z; the
    human reply lands on robot vertex v' and the DFA reads L(v').
    """

    game: Game | None = None
    dfa: Dfa | None = None

    def vertex(self, s: int) -> int:
        return self.keys[s][1]

    def dfa_state(self, s: int) -> int:
        return self.keys[s][2]

    def robot_key(self, s: int) -> tuple[int, int]:
        """(game vertex, dfa state) of a robot state; the strategy key."""
        return self.keys[s][1], self.keys[s][2]

    def state_text(self, s: int) -> str:
        return self.game.state_text(self.vertex(s))

    def action_name(self, s: int, action: int) -> str:
        return self.game.action_name(self.vertex(s), action)


def initial_dfa_state(game: Game, dfa: Dfa) -> int:
    return dfa.step(dfa.initial, game.labels(game.initial))


def build_product(game: Game, dfa: Dfa, max_states: int | None = None, absorbing: bool = False) -> ProductGame:
    """Reachable product from s0 = (v0, delta(z0, L(v0)))."""
    cap = max_states if max_states is not None else get_settings().max_states
    product = ProductGame(game=game, dfa=dfa)
    z0 = initial_dfa_state(game, dfa)
    s0, _ = product.add_state((Player.ROBOT, game.initial, z0), Player.ROBOT)
    product.initial = s0
    stack = [s0]

    def visit(key: tuple) -> int:
        sid, added = product.add_state(key, key[0])
        if added:
            if len(product) > cap:
                raise StateCapExceeded(
                    f"Product exceeds {humanize.intcomma(cap)} states",
                    count_estimate=len(game.vertices) * dfa.num_states,
                )
            if key[0] == Player.ROBOT and dfa.is_accepting(key[2]):
                product.accepting.add(sid)
            stack.append(sid)
        return sid

    if dfa.is_accepting(z0):
        product.accepting.add(s0)
    while stack:
        s = stack.pop()
        player, v, z = product.keys[s]
        if absorbing and s in product.accepting:
            continue
        out: list[Edge] = []
        for e in game.edges[v]:
            if player == Player.ROBOT:
                target = visit((Player.HUMAN, e.target, z))
            else:
                target = visit((Player.ROBOT, e.target, dfa.step(z, game.labels(e.target))))
            out.append(Edge(action=e.action, cost=e.cost, target=target))
        product.edges[s] = out

    logger.info(
        f"Product game: {humanize.intcomma(len(product))} states, "
        f"{humanize.intcomma(product.num_edges)} edges, {len(product.accepting)} accepting"
    )
    return product
