import pytest

from src.domain import (
    NOOP,
    abstract,
    build_game,
    fact_label,
    gen_benchmark,
    goal_formula,
    load_json,
    load_pddl,
    loads_json,
    parse_instance,
    parse_pddl,
)
from src.enums import Player, Region
from src.exceptions import (
    DanglingIdError,
    SchemaViolationError,
    StateCapExceeded,
    UngroundableParameterError,
    UnsupportedPddlFeature,
)
from src.schema import CapsSchema
from tests.games import DATA

BASE = {
    "name": "two-loc",
    "locations": [{"id": "l0"}, {"id": "l1", "region": "robot-only"}],
    "objects": [{"id": "b0"}],
    "init": {"placements": {"b0": "l1"}},
    "goal": {"placements": {"b0": "l0"}},
}

DOMAIN = """
(define (domain d)
  (:requirements :strips :typing)
  (:types box place)
  (:predicates (at ?b - box ?p - place))
  (:action push
    :parameters (?b - box ?from ?to - place)
    :precondition (and (at ?b ?from))
    :effect (and (at ?b ?to) (not (at ?b ?from)))))
"""

PROBLEM = """
(define (problem p)
  (:domain d)
  (:objects b - box x y - place)
  (:init (at b x))
  (:goal (and (at b y))))
"""


# ----------------------
# JSON instances
# ----------------------
def test_labels_follow_placement_naming():
    assert fact_label("at(b0,l0)") == "p_b0,l0"
    assert fact_label("holding(b0)") == "holding_b0"
    assert fact_label("handempty") == "handempty"


def test_sample_instances_load():
    assert load_json(DATA / "one_box.json").name == "one-box"
    aria = load_json(DATA / "aria_lab.json")
    assert len(aria.object_ids) == 5
    assert len(aria.location_ids) == 7
    assert len(aria.movable_ids) == 5
    assert aria.human_locations() == ["bench", "tray"]


def test_compiled_task_costs_by_region():
    task = parse_instance(BASE).to_strips()
    costs = {a.name: a.cost for a in task.robot_actions}
    assert costs["grasp(b0,l1)"] == 3
    assert costs["release(b0,l0)"] == 1
    assert task.human_actions == []
    assert task.human_action_names() == [NOOP]


def test_shared_cost_and_handover():
    data = dict(BASE, locations=[{"id": "l0"}, {"id": "h0", "region": "human-reachable"}])
    data["init"] = {"placements": {"b0": "h0"}}
    task = parse_instance(dict(data, costs={"shared": 5})).to_strips()
    costs = {a.name: a.cost for a in task.robot_actions}
    assert costs["release(b0,l0)"] == 5
    assert costs["release(b0,h0)"] == 1
    assert task.human_actions == []
    handover = parse_instance(dict(data, handover=True)).to_strips()
    assert [a.name for a in handover.human_actions] == ["move(b0,h0,l0)"]


def test_goal_formula():
    task = parse_instance(BASE).to_strips()
    assert goal_formula(task) == "F(p_b0,l0)"


def test_schema_violation_has_pointer():
    bad = dict(BASE, locations=[{"id": "l0", "region": "kitchen"}])
    with pytest.raises(SchemaViolationError) as err:
        parse_instance(bad)
    assert err.value.pointer.startswith("/locations/0")


def test_unknown_field_rejected():
    with pytest.raises(SchemaViolationError):
        parse_instance(dict(BASE, colour="red"))


def test_dangling_location():
    bad = dict(BASE, goal={"placements": {"b0": "l9"}})
    with pytest.raises(DanglingIdError) as err:
        parse_instance(bad)
    assert err.value.pointer == "/goal/placements/b0"


def test_duplicate_keys_rejected():
    with pytest.raises(SchemaViolationError):
        loads_json('{"name": "a", "name": "b"}')


def test_object_without_place():
    bad = dict(BASE, init={"placements": {}})
    with pytest.raises(SchemaViolationError):
        parse_instance(bad)


# ----------------------
# Games
# ----------------------
def test_game_alternates(one_box):
    game, _ = one_box
    assert game.player(game.initial) == Player.ROBOT
    for v, out in enumerate(game.edges):
        for e in out:
            assert game.player(e.target) != game.player(v)


def test_human_always_has_noop():
    game = build_game(gen_benchmark(3, 1, seed=0).to_strips())
    for v in game.human_vertices():
        assert game.edges[v][0].action == 0
        assert game.edges[v][0].cost == 0


def test_abstraction_joins_robot_and_human_moves():
    game = build_game(gen_benchmark(3, 1, seed=0).to_strips())
    agame = abstract(game)
    assert agame.states == game.robot_vertices()
    total = sum(len(game.edges[e.target]) for v in agame.states for e in game.edges[v])
    assert agame.num_edges == total


def test_state_cap_reports_estimate():
    task = load_json(DATA / "aria_lab.json").to_strips()
    with pytest.raises(StateCapExceeded) as err:
        build_game(task, max_states=50)
    assert err.value.count_estimate > 50
    assert err.value.exit_code == 3


# ----------------------
# Generator
# ----------------------
def test_generator_is_deterministic():
    assert gen_benchmark(5, 3, seed=4).to_json() == gen_benchmark(5, 3, seed=4).to_json()


def test_generator_three_regions():
    inst = gen_benchmark(7, 3, seed=1)
    regions = [inst.region(l) for l in inst.location_ids]
    assert regions == [Region.HUMAN_REACHABLE] * 2 + [Region.SHARED] * 2 + [Region.ROBOT_ONLY] * 3
    goal, init = inst.schema.goal.placements, inst.schema.init.placements
    assert goal["o0"] == "l2"
    assert inst.region(init["o0"]) == Region.HUMAN_REACHABLE
    for obj in ("o1", "o2"):
        assert inst.region(goal[obj]) == Region.ROBOT_ONLY
        assert goal[obj] != init[obj]


def test_generator_human_hands_over_into_shared_cell():
    task = gen_benchmark(4, 1, seed=0).to_strips()
    assert [a.name for a in task.human_actions] == ["move(o0,l0,l1)"]
    costs = {a.name: a.cost for a in task.robot_actions}
    assert costs["release(o0,l0)"] == 1
    assert costs["release(o0,l1)"] == 3


def test_generator_without_room_for_a_shared_cell():
    inst = gen_benchmark(2, 1, seed=3)
    assert [inst.region(l) for l in inst.location_ids] == [Region.HUMAN_REACHABLE, Region.ROBOT_ONLY]
    assert inst.schema.goal.placements["o0"] == "l1"


def test_generator_costs_two_classes():
    task = gen_benchmark(5, 2, seed=0).to_strips()
    assert task.cost_classes() == [1, 3]


@pytest.mark.parametrize("args", [(1, 1), (3, 0)])
def test_generator_rejects_degenerate_sizes(args):
    with pytest.raises(ValueError):
        gen_benchmark(*args)


# ----------------------
# PDDL
# ----------------------
def test_pddl_sample_with_caps():
    task = load_pddl(
        DATA / "pick_place_domain.pddl",
        DATA / "pick_place_problem.pddl",
        DATA / "pick_place_caps.json",
    )
    assert {a.schema for a in task.robot_actions} == {"grasp", "release"}
    assert {a.schema for a in task.human_actions} == {"move"}
    assert all(a.cost == 1 for a in task.robot_actions)
    # move is grounded over the human-reachable subtype only
    assert all(set(a.args[1:]) <= {"table", "side"} for a in task.human_actions)


def test_pddl_grounding_counts_follow_arities():
    domain = (DATA / "pick_place_domain.pddl").read_text()
    problem = """
    (define (problem three-boxes)
      (:domain pick-place)
      (:objects b0 b1 b2 - box  h0 h1 - hloc  l0 l1 l2 - location)
      (:init (at b0 h0) (at b1 l0) (at b2 l1) (handempty))
      (:goal (and (at b0 l2))))
    """
    task = parse_pddl(domain, problem, CapsSchema(human_actions=["move"]))
    boxes, places, human_places = 3, 5, 2
    # grasp and release over box x location, move over box x hloc x hloc
    assert len(task.robot_actions) == 2 * boxes * places
    assert len(task.human_actions) == boxes * human_places**2
    assert len(task.facts) == boxes * places + boxes + 1


def test_pddl_grounding_without_caps():
    task = parse_pddl(DOMAIN, PROBLEM)
    assert len(task.robot_actions) == 4
    assert task.goal == frozenset({"at(b,y)"})


def test_pddl_rejects_negative_precondition():
    domain = DOMAIN.replace("(and (at ?b ?from))", "(and (not (at ?b ?to)))")
    with pytest.raises(UnsupportedPddlFeature) as err:
        parse_pddl(domain, PROBLEM)
    assert err.value.construct == "not"


def test_pddl_rejects_functions():
    domain = DOMAIN.replace("(:types box place)", "(:types box place) (:functions (total-cost))")
    with pytest.raises(UnsupportedPddlFeature):
        parse_pddl(domain, PROBLEM)


def test_pddl_ungroundable_parameter():
    problem = PROBLEM.replace("x y - place", "")
    problem = problem.replace("(at b x)", "").replace("(and (at b y))", "(and)")
    with pytest.raises(UngroundableParameterError):
        parse_pddl(DOMAIN, problem)
