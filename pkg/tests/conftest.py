import json
from pathlib import Path

import pytest

from src.domain import load_json
from tests.games import DATA, compile_pair, detour_task


@pytest.fixture
def detour():
    """(game, dfa) with min-max 6 via a, reg* 1 via b at B = 8."""
    return compile_pair(detour_task())


@pytest.fixture
def one_box():
    return compile_pair(load_json(DATA / "one_box.json").to_strips())


@pytest.fixture
def write_instance(tmp_path):
    def write(data: dict, name: str = "instance.json") -> Path:
        path = tmp_path / name
        path.write_text(json.dumps(data), encoding="utf-8")
        return path

    return write
