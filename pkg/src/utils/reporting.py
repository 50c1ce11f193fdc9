import csv
import hashlib
import json
import logging
from datetime import timedelta
from pathlib import Path
from typing import Iterable

import humanize
from pydantic import BaseModel

logger = logging.getLogger(__name__)


def dumps_canonical(data) -> str:
    """Stable JSON: sorted keys, fixed separators, trailing newline."""
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def digest(*parts: str) -> str:
    h = hashlib.sha256()
    for part in parts:
        h.update(part.encode("utf-8"))
        h.update(b"\0")
    return h.hexdigest()


def ensure_dir(path: str | Path) -> Path:
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    return out


def write_model(path: str | Path, model: BaseModel) -> Path:
    target = Path(path)
    target.write_text(dumps_canonical(model.model_dump(mode="json")), encoding="utf-8")
    logger.debug(f"Wrote {target}")
    return target


def append_jsonl(path: str | Path, records: Iterable[BaseModel]) -> int:
    """Append one JSON object per line; returns how many were written."""
    count = 0
    with Path(path).open("a", encoding="utf-8") as fh:
        for record in records:
            fh.write(json.dumps(record.model_dump(mode="json"), sort_keys=True) + "\n")
            count += 1
    return count


def read_jsonl(path: str | Path) -> list[dict]:
    with Path(path).open(encoding="utf-8") as fh:
        return [json.loads(line) for line in fh if line.strip()]


def flatten(record: dict, prefix: str = "") -> dict:
    """Nested dicts become dotted columns."""
    flat: dict = {}
    for key, value in record.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            flat.update(flatten(value, f"{name}."))
        else:
            flat[name] = value
    return flat


def write_csv(path: str | Path, records: list[BaseModel]) -> Path:
    rows = [flatten(r.model_dump(mode="json")) for r in records]
    columns = sorted({c for row in rows for c in row})
    target = Path(path)
    with target.open("w", newline="", encoding="utf-8") as fh:
        writer = csv.DictWriter(fh, fieldnames=columns)
        writer.writeheader()
        writer.writerows(rows)
    logger.info(f"Wrote {humanize.intcomma(len(rows))} rows to {target}")
    return target


def describe_phases(phase_seconds: dict[str, float]) -> str:
    return ", ".join(
        f"{name} {humanize.precisedelta(timedelta(seconds=sec), minimum_unit='milliseconds')}"
        for name, sec in phase_seconds.items()
    )
