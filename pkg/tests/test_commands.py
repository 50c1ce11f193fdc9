import json

import pytest

from src.commands.bench import check_agreement, int_range, sweep_points
from src.commands.common import REPORT_FILE, STRATEGY_DOT_FILE, STRATEGY_FILE
from src.commands.rollout import TRANSCRIPT_FILE, parse_human
from src.domain import gen_benchmark
from src.enums import HumanPolicyKind, Objective, RunStatus, Scenario, SolverKind
from src.exceptions import SchemaViolationError
from src.main import main
from src.schema import BenchRecord
from src.utils.reporting import read_jsonl
from tests.games import DATA

ONE_BOX = str(DATA / "one_box.json")


@pytest.fixture
def out(tmp_path, monkeypatch):
    # log files land under the working directory
    monkeypatch.chdir(tmp_path)
    return tmp_path / "out"


def synth(out, *extra):
    return main(["synth", "--instance", ONE_BOX, "--out", str(out), *extra])


def last_report(out) -> dict:
    return read_jsonl(out / REPORT_FILE)[-1]


# ----------------------
# synth
# ----------------------
@pytest.mark.parametrize("solver", [s.value for s in SolverKind])
def test_synth_one_box(out, solver):
    assert synth(out, "--solver", solver) == 0
    report = last_report(out)
    assert report["status"] == "ok"
    assert report["value"] == 1
    artifact = json.loads((out / STRATEGY_FILE).read_text(encoding="utf-8"))
    assert artifact["value"] == 1
    assert any(e["action"] == "release(b0,l0)" for e in artifact["entries"])


def test_symbolic_synth_writes_diagram(out):
    assert synth(out) == 0
    assert (out / STRATEGY_DOT_FILE).read_text(encoding="utf-8").startswith("digraph")


def test_synth_is_reproducible(tmp_path, out):
    other = tmp_path / "again"
    assert synth(out) == 0
    assert synth(other) == 0
    assert (out / STRATEGY_FILE).read_bytes() == (other / STRATEGY_FILE).read_bytes()


def test_regret_budget_defaults_from_minmax(out):
    assert synth(out, "--objective", "regret", "--solver", "explicit") == 0
    report = last_report(out)
    assert report["budget_auto"] is True
    # ceil(1.25 * 1)
    assert report["budget"] == 2
    assert report["regret"] == 0


def test_explicit_budget_recorded(out):
    assert synth(out, "--objective", "regret", "--budget", "4") == 0
    report = last_report(out)
    assert report["budget"] == 4
    assert report["budget_auto"] is False


def test_infeasible_formula_exit_code(out):
    assert synth(out, "--formula", "false") == 2
    assert last_report(out)["status"] == "infeasible"
    assert not (out / STRATEGY_FILE).exists()


def test_state_cap_exit_code(out):
    code = main(["synth", "--instance", str(DATA / "aria_lab.json"), "--max-states", "50", "--out", str(out)])
    assert code == 3
    assert last_report(out)["status"] == "cap-exceeded"


def test_undeclared_atom_fails(out):
    assert synth(out, "--formula", "F(p_b0,nowhere)") == 1


def test_bad_instance_reported(out, write_instance):
    path = write_instance({"name": "broken", "locations": [], "objects": [{"id": "b0"}], "init": {}})
    assert main(["synth", "--instance", str(path), "--out", str(out)]) == 1
    report = last_report(out)
    assert report["status"] == "error"
    assert report["instance"] == "instance"


def test_generated_instance_round_trip(out, write_instance):
    path = write_instance(json.loads(gen_benchmark(3, 1, seed=2).to_json()), name="bench.json")
    assert main(["synth", "--instance", str(path), "--solver", "explicit", "--out", str(out)]) == 0
    assert last_report(out)["instance"] == "bench-L3-O1-s2"


# ----------------------
# translate
# ----------------------
def test_translate_free_formula(out):
    assert main(["translate", "--formula", "F(p)", "--out", str(out)]) == 0
    data = json.loads((out / "dfa.json").read_text(encoding="utf-8"))
    assert data["num_states"] == 2
    assert (out / "dfa.dot").exists()


def test_translate_instance_goal(out):
    assert main(["translate", "--instance", ONE_BOX, "--out", str(out)]) == 0
    assert (out / "dfa.json").exists()


def test_translate_needs_formula(out):
    assert main(["translate", "--out", str(out)]) == 1


# ----------------------
# rollout
# ----------------------
def rollout_args(out, *extra):
    return ["rollout", "--strategy", str(out / STRATEGY_FILE), "--out", str(out), *extra]


def transcripts(out) -> list:
    return json.loads((out / TRANSCRIPT_FILE).read_text(encoding="utf-8"))


def test_rollout_zero_plays(out):
    assert synth(out) == 0
    assert main(rollout_args(out, "-n", "0")) == 0
    assert transcripts(out) == []


def test_rollout_adversarial_pays_value(out):
    assert synth(out) == 0
    assert main(rollout_args(out, "--human", "adversarial", "-n", "2")) == 0
    plays = transcripts(out)
    assert [p["payoff"] for p in plays] == [1, 1]
    assert all(p["accepted"] for p in plays)


def test_rollout_regret_artifact(out):
    assert synth(out, "--objective", "regret") == 0
    assert main(rollout_args(out, "--human", "random:3", "-n", "3")) == 0
    assert all(p["accepted"] for p in transcripts(out))


def test_rollout_rejects_tampered_artifact(out):
    assert synth(out) == 0
    path = out / STRATEGY_FILE
    artifact = json.loads(path.read_text(encoding="utf-8"))
    artifact["digest"] = "0" * 64
    path.write_text(json.dumps(artifact), encoding="utf-8")
    assert main(rollout_args(out)) == 1
    assert not (out / TRANSCRIPT_FILE).exists()


def test_parse_human_script(tmp_path):
    script = tmp_path / "human.json"
    script.write_text(json.dumps([0, "noop"]), encoding="utf-8")
    policy = parse_human(f"script:{script}", ["noop"])
    assert policy.kind == HumanPolicyKind.SCRIPTED
    assert list(policy.script) == [0, 0]
    assert parse_human("random", ["noop"], seed=5).seed == 5


def test_parse_human_rejects_unknown(tmp_path):
    script = tmp_path / "human.json"
    script.write_text(json.dumps(["dance"]), encoding="utf-8")
    with pytest.raises(SchemaViolationError):
        parse_human(f"script:{script}", ["noop"])
    with pytest.raises(SchemaViolationError):
        parse_human("telepathic", ["noop"])


# ----------------------
# bench
# ----------------------
def test_int_range():
    assert int_range("3:5") == [3, 4, 5]
    assert int_range("3,7") == [3, 7]


def test_sweep_points_defaults():
    assert [p[0] for p in sweep_points(Scenario.VARY_L, None, 5, 3, ())] == [3, 4, 5, 6, 7]
    assert sweep_points(Scenario.VARY_B, None, 4, 2, (1.0, 2.0)) == [(4, 2, 1.0), (4, 2, 2.0)]


def test_bench_vary_l(out):
    args = ["bench", "--scenario", "vary-L", "--range", "3:4", "--objects", "1", "--out", str(out)]
    assert main(args) == 0
    records = read_jsonl(out / "bench.jsonl")
    assert len(records) == 2 * len(SolverKind)
    assert {r["status"] for r in records} == {"ok"}
    assert {r["num_locations"] for r in records} == {3, 4}
    assert all(r["layers_identical"] for r in records if r["solver"] == "symbolic-partitioned")
    assert (out / "bench.csv").exists()
    assert len(list((out / "instances").glob("*.json"))) == 2


def test_bench_vary_b(out):
    args = ["bench", "--scenario", "vary-B", "--locations", "3", "--objects", "1", "--out", str(out)]
    args += ["--factors", "1.0,2.0", "--solvers", "explicit,symbolic-monolithic"]
    assert main(args) == 0
    records = read_jsonl(out / "bench.jsonl")
    assert len(records) == 4
    assert {r["objective"] for r in records} == {"regret"}
    by_factor = {}
    for r in records:
        by_factor.setdefault(r["budget_factor"], set()).add(r["regret"])
    # solvers agree per budget, and more budget never raises regret
    assert all(len(v) == 1 for v in by_factor.values())
    assert by_factor[2.0].pop() <= by_factor[1.0].pop()


def bench_record(solver: SolverKind, value: int, **kwargs) -> BenchRecord:
    return BenchRecord(
        instance="bench-L3-O1-s0",
        formula="F(p_o0,l2)",
        solver=solver,
        objective=Objective.MINMAX,
        value=value,
        feasible=True,
        scenario=Scenario.VARY_L,
        num_locations=3,
        num_objects=1,
        instance_seed=0,
        **kwargs,
    )


def test_check_agreement_marks_disagreement():
    records = [bench_record(SolverKind.EXPLICIT, 4), bench_record(SolverKind.SYMBOLIC_MONOLITHIC, 5)]
    assert check_agreement(records) == ["bench-L3-O1-s0"]
    assert {r.status for r in records} == {RunStatus.MISMATCH}


def test_check_agreement_flags_layer_drift():
    records = [
        bench_record(SolverKind.EXPLICIT, 4),
        bench_record(SolverKind.SYMBOLIC_PARTITIONED, 4, layers_identical=False),
    ]
    assert check_agreement(records) == ["bench-L3-O1-s0"]


def test_check_agreement_ignores_skipped():
    records = [
        bench_record(SolverKind.EXPLICIT, 4),
        bench_record(SolverKind.SYMBOLIC_MONOLITHIC, 9, status=RunStatus.SKIPPED),
    ]
    assert check_agreement(records) == []
    assert records[0].status == RunStatus.OK
