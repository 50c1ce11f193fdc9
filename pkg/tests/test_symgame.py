import pytest

from src.ddlib import INFINITY, assign_code, read_code, width_for
from src.domain import abstract
from src.enums import Player
from src.exceptions import BitBudgetExceeded
from src.solvers import build_product, initial_dfa_state
from src.symgame import (
    action_values,
    build_monolithic,
    build_partitioned,
    controllable_pre,
    encode,
    pre_image,
    product_pre,
    reachable,
    recompose,
)
from src.regret import build_utility_explicit, build_utility_symbolic
from tests.games import bench_pair


@pytest.fixture
def encoded():
    game, dfa = bench_pair(3, 2, seed=1)
    return game, dfa, encode(abstract(game), dfa=dfa)


def edge_assignment(sg, v, a, h):
    assignment = assign_code(sg.x_vars, sg.state_codec[v])
    assignment.update(assign_code(sg.o_vars, sg.robot_codec[a]))
    assignment.update(assign_code(sg.i_vars, sg.human_codec[h]))
    return assignment


def test_block_widths(encoded):
    game, dfa, sg = encoded
    counts = sg.var_counts()
    assert counts["X"] == width_for(len(game.robot_vertices()))
    assert counts["Y"] == width_for(dfa.num_states)
    assert counts["U"] == 0
    assert counts["primed"] == counts["X"] + counts["Y"]


def test_valid_states_and_edges_decode(encoded):
    game, _, sg = encoded
    agame = sg.agame
    assert sg.decode_states(sg.valid_state) == set(agame.states)
    expected = {(v, e.robot_action, e.human_action) for v in agame.states for e in agame.edges[v]}
    assert sg.decode_edges(sg.valid) == expected


def test_eta_points_at_targets(encoded):
    _, _, sg = encoded
    m = sg.manager
    for v in sg.agame.states:
        for e in sg.agame.edges[v]:
            assignment = edge_assignment(sg, v, e.robot_action, e.human_action)
            bits = {x: bool(m.eval(fn, assignment)) for x, fn in zip(sg.x_vars, sg.eta)}
            assert read_code(bits, sg.x_vars) == sg.state_codec[e.target]


def test_relation_forms_cover_same_edges(encoded):
    _, _, sg = encoded
    mono, part = build_monolithic(sg), build_partitioned(sg)
    assert mono.costs == part.costs == [1, 3]
    assert len(mono) == 2
    assert len(part) >= len(mono)
    assert recompose(mono) == recompose(part)


def test_variable_budget():
    game, dfa = bench_pair(3, 2, seed=1)
    with pytest.raises(BitBudgetExceeded):
        encode(abstract(game), dfa=dfa, max_vars=4)


def test_reachable_matches_explicit_product(encoded):
    game, dfa, sg = encoded
    z0 = initial_dfa_state(game, dfa)
    reach = reachable(sg, sg.state_cube(game.initial) & sg.dfa_cube(z0))
    product = build_product(game, dfa)
    explicit = {product.robot_key(s) for s in product.robot_states()}
    assert set(sg.iter_product_states(reach)) == explicit


def test_action_values_of_zero_are_costs(encoded):
    _, _, sg = encoded
    m = sg.manager
    q = action_values(sg, m.zero, build_partitioned(sg))
    task = sg.agame.game.task
    for v in sg.agame.states:
        enabled = {e.robot_action for e in sg.agame.edges[v]}
        for a in range(len(task.robot_actions)):
            assignment = assign_code(sg.x_vars, sg.state_codec[v])
            assignment.update(assign_code(sg.o_vars, sg.robot_codec[a]))
            expected = task.robot_actions[a].cost if a in enabled else INFINITY
            assert m.eval(q, assignment) == expected


def test_qualitative_pre_of_everything_is_every_live_state(encoded):
    _, _, sg = encoded
    m = sg.manager
    everywhere = sg.valid_state & sg.valid_dfa()
    pre = controllable_pre(sg, everywhere, build_monolithic(sg))
    live = {v for v in sg.agame.states if sg.agame.edges[v]}
    assert {state[0] for state in sg.iter_product_states(pre & everywhere)} == live
    assert pre != m.zero


def edge_targets(sg) -> list[int]:
    return sorted({e.target for v in sg.agame.states for e in sg.agame.edges[v]})


def test_pre_image_collects_edges_into_a_state(encoded):
    _, _, sg = encoded
    tr = build_monolithic(sg)
    for t in edge_targets(sg)[:4]:
        edges = sg.manager.zero
        for tv in tr:
            edges = edges | pre_image(sg, sg.state_cube(t), tv)
        expected = {
            (v, e.robot_action, e.human_action) for v in sg.agame.states for e in sg.agame.edges[v] if e.target == t
        }
        assert expected
        assert sg.decode_edges(edges) == expected


def test_product_pre_reads_the_label_of_the_successor(encoded):
    game, dfa, sg = encoded
    m = sg.manager
    tr = build_monolithic(sg)
    vars_ = sg.x_vars + sg.y_vars + sg.o_vars + sg.i_vars
    for t in edge_targets(sg)[:4]:
        for z_next in range(dfa.num_states):
            omega = sg.state_cube(t) & sg.dfa_cube(z_next)
            pre = m.zero
            for tv in tr:
                pre = pre | product_pre(sg, omega, tv)
            found = {
                (
                    sg.decode_state(a),
                    read_code(a, sg.y_vars),
                    sg.robot_codec.inverse[read_code(a, sg.o_vars)],
                    sg.human_codec.inverse[read_code(a, sg.i_vars)],
                )
                for a in m.sat_iter(pre & sg.valid_dfa(), vars_)
            }
            expected = {
                (v, z, e.robot_action, e.human_action)
                for v in sg.agame.states
                for e in sg.agame.edges[v]
                if e.target == t
                for z in range(dfa.num_states)
                if dfa.step(z, game.labels(t)) == z_next
            }
            assert found == expected


@pytest.mark.parametrize("budget", [4, 6, 9])
def test_symbolic_utility_reach_matches_explicit(budget):
    game, dfa = bench_pair(3, 1, seed=0)
    su = build_utility_symbolic(game, dfa, budget)
    ug = build_utility_explicit(build_product(game, dfa, absorbing=True), budget)
    explicit = {ug.keys[s][1:] for s in range(len(ug)) if s not in ug.sinks and ug.players[s] == Player.ROBOT}
    symbolic = set(su.sg.iter_product_states(su.reach))
    assert {k for k in symbolic if k[2] <= budget} == explicit
    assert any(k[2] == su.sg.overshoot for k in symbolic) == bool(ug.sinks)
