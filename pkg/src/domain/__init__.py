from src.domain.game import AbstractedGame, Edge, Game, JointEdge, abstract, build_game
from src.domain.generator import gen_benchmark
from src.domain.instance import ManipInstance, load_json, loads_json, parse_instance
from src.domain.pddl import load_pddl, parse_pddl
from src.domain.strips import NOOP, GroundAction, StripsTask, fact_label, goal_formula

__all__ = [
    "NOOP",
    "AbstractedGame",
    "Edge",
    "Game",
    "GroundAction",
    "JointEdge",
    "ManipInstance",
    "StripsTask",
    "abstract",
    "build_game",
    "fact_label",
    "gen_benchmark",
    "goal_formula",
    "load_json",
    "load_pddl",
    "loads_json",
    "parse_instance",
    "parse_pddl",
]
