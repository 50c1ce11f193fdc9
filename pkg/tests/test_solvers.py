import itertools

import pytest

from src.ddlib import INFINITY
from src.domain import abstract, gen_benchmark
from src.enums import Player, SolverKind
from src.exceptions import DivergenceError, StateCapExceeded, StrategyUndefinedError
from src.solvers import (
    HumanPolicy,
    build_product,
    explicit_vi,
    layers_identical,
    rollout,
    solve_minmax,
    strategy_values,
    symbolic_vi,
    symbolic_vi_uniform,
)
from src.symgame import build_monolithic, encode
from tests.games import ORACLE_SEEDS, TINY_SHAPES, bench_pair, compile_pair, tiny_pairs

SOLVERS = list(SolverKind)


def product_strategy(result):
    """Strategy of an explicit min-max result over product state ids."""
    product = result.product
    return {
        s: result.strategy[product.robot_key(s)]
        for s in product.robot_states()
        if product.robot_key(s) in result.strategy
    }


def plays(arena, strategy, horizon):
    """Every play of the strategy against every human reply sequence, up to horizon robot moves."""
    stack = [(arena.initial, 0, 0)]
    while stack:
        s, cost, depth = stack.pop()
        if s in arena.accepting:
            yield True, cost
            continue
        if depth >= horizon or s not in strategy:
            yield False, cost
            continue
        move = next(e for e in arena.edges[s] if e.action == strategy[s])
        for reply in arena.edges[move.target]:
            stack.append((reply.target, cost + move.cost, depth + 1))


# ----------------------
# Hand-checked instances
# ----------------------
@pytest.mark.parametrize("solver", SOLVERS)
def test_one_box_direct_placement(one_box, solver):
    game, dfa = one_box
    result = solve_minmax(game, dfa, solver=solver)
    assert result.value == 1
    assert game.task.robot_actions[result.strategy[result.initial]].name == "release(b0,l0)"


@pytest.mark.parametrize("solver", SOLVERS)
def test_detour_minmax_goes_alone(detour, solver):
    game, dfa = detour
    result = solve_minmax(game, dfa, solver=solver)
    assert result.value == 6
    assert game.task.robot_actions[result.strategy[result.initial]].name == "a()"


@pytest.mark.parametrize("solver", SOLVERS)
def test_unsatisfiable_task_is_infeasible(solver):
    game, dfa = bench_pair(3, 1, seed=0, formula="false")
    result = solve_minmax(game, dfa, solver=solver)
    assert result.value == INFINITY
    assert not result.feasible
    assert result.strategy == {}


def test_true_formula_costs_nothing():
    game, dfa = bench_pair(3, 1, seed=0, formula="true")
    for solver in SOLVERS:
        assert solve_minmax(game, dfa, solver=solver).value == 0


# ----------------------
# Cross-solver identity
# ----------------------
@pytest.mark.parametrize("shape", TINY_SHAPES)
@pytest.mark.parametrize("seed", ORACLE_SEEDS[:4])
def test_solvers_agree_everywhere(shape, seed):
    game, dfa = bench_pair(*shape, seed=seed)
    results = [solve_minmax(game, dfa, solver=s) for s in SOLVERS]
    reference = results[0]
    for other in results[1:]:
        assert other.values == reference.values
        assert other.strategy == reference.strategy


def test_uniform_costs_take_the_attractor_path():
    task = gen_benchmark(3, 2, seed=2, cost_near=2, cost_far=2).to_strips()
    game, dfa = compile_pair(task)
    explicit = solve_minmax(game, dfa, solver=SolverKind.EXPLICIT)
    symbolic = solve_minmax(game, dfa, solver=SolverKind.SYMBOLIC_PARTITIONED)
    assert symbolic.values == explicit.values
    assert symbolic.strategy == explicit.strategy
    assert all(v % 2 == 0 for v in explicit.values.values() if v != INFINITY)


@pytest.mark.parametrize("shape", [(3, 1), (4, 1), (3, 2), (5, 2)])
def test_attractor_matches_explicit_on_uniform_costs(shape):
    task = gen_benchmark(*shape, seed=1, cost_near=2, cost_far=2).to_strips()
    game, dfa = compile_pair(task)
    sg = encode(abstract(game), dfa=dfa)
    tr = build_monolithic(sg)
    assert tr.costs == [2]
    solution = symbolic_vi_uniform(sg, tr)
    explicit = solve_minmax(game, dfa, solver=SolverKind.EXPLICIT)
    for state, value in explicit.values.items():
        assert solution.value_of(state) == value


def test_attractor_refuses_mixed_costs():
    game, dfa = bench_pair(3, 1, seed=0)
    sg = encode(abstract(game), dfa=dfa)
    with pytest.raises(ValueError):
        symbolic_vi_uniform(sg, build_monolithic(sg))


@pytest.mark.parametrize("seed", ORACLE_SEEDS[:3])
def test_monolithic_and_partitioned_layers_identical(seed):
    game, dfa = bench_pair(4, 1, seed=seed)
    assert layers_identical(game, dfa)


def test_symbolic_layers_match_explicit_values():
    game, dfa = bench_pair(3, 2, seed=0)
    sg = encode(abstract(game), dfa=dfa)
    solution = symbolic_vi(sg, build_monolithic(sg))
    explicit = solve_minmax(game, dfa, solver=SolverKind.EXPLICIT)
    for state, value in explicit.values.items():
        assert solution.value_of(state) == value


def test_explicit_state_cap(one_box):
    game, dfa = one_box
    with pytest.raises(StateCapExceeded):
        solve_minmax(game, dfa, solver=SolverKind.EXPLICIT, max_states=2)


def test_divergence_guard(detour):
    game, dfa = detour
    with pytest.raises(DivergenceError):
        explicit_vi(build_product(game, dfa), max_iterations=1)


# ----------------------
# Strategy certification
# ----------------------
@pytest.mark.parametrize("pair_index", range(6))
def test_every_play_wins_within_value(pair_index):
    game, dfa = tiny_pairs()[pair_index]
    result = solve_minmax(game, dfa, solver=SolverKind.EXPLICIT)
    assert result.feasible
    strategy = product_strategy(result)
    for accepted, cost in plays(result.product, strategy, horizon=max(8, result.value)):
        assert accepted
        assert cost <= result.value


@pytest.mark.parametrize("seed", ORACLE_SEEDS[:3])
def test_no_memoryless_strategy_beats_value(seed):
    game, dfa = bench_pair(2, 1, seed=seed)
    result = solve_minmax(game, dfa, solver=SolverKind.EXPLICIT)
    product = result.product
    live = [s for s in product.robot_states() if s not in product.accepting and product.edges[s]]
    choices = [sorted({e.action for e in product.edges[s]}) for s in live]
    assert 0 < len(list(itertools.product(*choices))) <= 5000
    for picks in itertools.product(*choices):
        worst, _ = strategy_values(product, dict(zip(live, picks)))
        assert worst[product.initial] >= result.value


@pytest.mark.full
@pytest.mark.parametrize("case", list(itertools.product(TINY_SHAPES, range(13)))[:50])
def test_solvers_agree_on_fifty_instances(case):
    shape, seed = case
    game, dfa = bench_pair(*shape, seed=seed)
    results = [solve_minmax(game, dfa, solver=s) for s in SOLVERS]
    for other in results[1:]:
        assert other.values == results[0].values
        assert other.strategy == results[0].strategy


@pytest.mark.full
@pytest.mark.parametrize("pair_index", range(20))
def test_every_play_wins_on_twenty_instances(pair_index):
    game, dfa = tiny_pairs(ORACLE_SEEDS[:5])[pair_index]
    result = solve_minmax(game, dfa, solver=SolverKind.EXPLICIT)
    strategy = product_strategy(result)
    for accepted, cost in plays(result.product, strategy, horizon=max(8, result.value)):
        assert accepted
        assert cost <= result.value


@pytest.mark.full
@pytest.mark.parametrize("seed", range(20))
def test_no_memoryless_strategy_beats_value_on_twenty_instances(seed):
    game, dfa = bench_pair(2, 1, seed=seed)
    result = solve_minmax(game, dfa, solver=SolverKind.EXPLICIT)
    product = result.product
    live = [s for s in product.robot_states() if s not in product.accepting and product.edges[s]]
    choices = [sorted({e.action for e in product.edges[s]}) for s in live]
    for picks in itertools.product(*choices):
        worst, _ = strategy_values(product, dict(zip(live, picks)))
        assert worst[product.initial] >= result.value


# ----------------------
# Rollouts
# ----------------------
@pytest.fixture
def solved():
    game, dfa = bench_pair(3, 2, seed=3)
    result = solve_minmax(game, dfa, solver=SolverKind.EXPLICIT)
    return result, product_strategy(result)


def test_adversarial_rollout_pays_the_value(solved):
    result, strategy = solved
    play = rollout(result.product, strategy, HumanPolicy.adversarial())
    assert play.accepted
    assert play.payoff == result.value


def test_cooperative_rollout_is_no_worse(solved):
    result, strategy = solved
    play = rollout(result.product, strategy, HumanPolicy.cooperative())
    assert play.accepted
    assert play.payoff <= result.value


@pytest.mark.parametrize("seed", range(5))
def test_random_human_never_breaks_the_guarantee(solved, seed):
    result, strategy = solved
    play = rollout(result.product, strategy, HumanPolicy.random(seed))
    assert play.accepted
    assert play.payoff <= result.value


def test_scripted_human_replays_adversary(solved):
    result, strategy = solved
    adversarial = rollout(result.product, strategy, HumanPolicy.adversarial())
    script = [step.human_action for step in adversarial.steps]
    replay = rollout(result.product, strategy, HumanPolicy.scripted(script))
    assert replay.payoff == adversarial.payoff == result.value
    assert replay.robot_actions == adversarial.robot_actions


def test_rollout_needs_a_strategy(solved):
    result, _ = solved
    with pytest.raises(StrategyUndefinedError):
        rollout(result.product, {}, HumanPolicy.adversarial())


def test_rollout_stops_at_initial_acceptance():
    game, dfa = bench_pair(3, 1, seed=0, formula="true")
    product = build_product(game, dfa)
    play = rollout(product, {}, HumanPolicy.adversarial())
    assert play.accepted
    assert play.steps == []
    assert product.players[product.initial] == Player.ROBOT
