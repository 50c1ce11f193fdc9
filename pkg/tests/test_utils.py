import csv
import json
from fractions import Fraction

import pytest

from src.config.settings import get_settings
from src.ddlib import INFINITY
from src.enums import Objective, SolverKind
from src.exceptions import InfeasibleError
from src.schema import RunReport
from src.utils.budget import auto_budget, budget_factor, resolve_budget
from src.utils.reporting import (
    append_jsonl,
    describe_phases,
    digest,
    dumps_canonical,
    flatten,
    read_jsonl,
    write_csv,
)


def report(**kwargs) -> RunReport:
    return RunReport(
        instance="one-box", formula="F(p)", solver=SolverKind.EXPLICIT, objective=Objective.MINMAX, **kwargs
    )


# ----------------------
# Budgets
# ----------------------
@pytest.mark.parametrize("value, expected", [(6, 8), (4, 5), (0, 0), (1, 2)])
def test_auto_budget_rounds_up(value, expected):
    assert auto_budget(value, factor=1.25) == expected


def test_auto_budget_avoids_float_drift():
    # 1.1 * 10 is 11.000000000000002 as a float
    assert auto_budget(10, factor=1.1) == 11


def test_auto_budget_needs_a_winner():
    with pytest.raises(InfeasibleError):
        auto_budget(INFINITY)


def test_explicit_budget_wins():
    assert resolve_budget(3, 6) == (3, False)
    assert resolve_budget(None, 6, factor=2.0) == (12, True)


def test_negative_budget_rejected():
    with pytest.raises(ValueError):
        resolve_budget(-1, 6)


def test_budget_factor_from_environment(monkeypatch):
    monkeypatch.setenv("DDSYNTH_BUDGET_FACTOR", "1.5")
    get_settings.cache_clear()
    try:
        assert budget_factor() == Fraction(3, 2)
        assert auto_budget(5) == 8
    finally:
        get_settings.cache_clear()


# ----------------------
# Reporting
# ----------------------
def test_digest_separates_parts():
    assert digest("ab", "c") != digest("a", "bc")
    assert digest("x") == digest("x")


def test_canonical_dump_is_order_free():
    assert dumps_canonical({"b": 1, "a": [2]}) == dumps_canonical({"a": [2], "b": 1})
    assert dumps_canonical({}).endswith("\n")


def test_flatten_dots_nested_keys():
    flat = flatten({"sizes": {"game_states": 4}, "phase_seconds": {"minmax": {"solve": 0.5}}, "value": 1})
    assert flat == {"sizes.game_states": 4, "phase_seconds.minmax.solve": 0.5, "value": 1}


def test_jsonl_appends(tmp_path):
    path = tmp_path / "report.jsonl"
    assert append_jsonl(path, [report(value=1)]) == 1
    assert append_jsonl(path, [report(value=2), report(value=3)]) == 2
    assert [row["value"] for row in read_jsonl(path)] == [1, 2, 3]


def test_csv_columns_cover_every_record(tmp_path):
    path = write_csv(tmp_path / "bench.csv", [report(sizes={"game_states": 4}), report(peak_nodes=9)])
    with path.open(encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    assert len(rows) == 2
    assert "sizes.game_states" in rows[0]
    assert rows[1]["peak_nodes"] == "9"
    assert rows[1]["sizes.game_states"] == ""


def test_report_serialises_enums_as_values(tmp_path):
    path = tmp_path / "report.jsonl"
    append_jsonl(path, [report()])
    row = json.loads(path.read_text(encoding="utf-8"))
    assert row["solver"] == "explicit"
    assert row["status"] == "ok"


def test_describe_phases_names_each_phase():
    text = describe_phases({"encode": 0.25, "solve": 1.5})
    assert text.startswith("encode ")
    assert "solve " in text
