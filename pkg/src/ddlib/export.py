import json
from pathlib import Path

import graphviz as gv

from src.ddlib.manager import TERMINAL_LEVEL, Manager, NodeRef
from src.ddlib.terminals import to_json


def to_dot(f: NodeRef, name: str = "dd") -> str:
    """DOT source for f: one node per line, terminals boxed, dashed low edges."""
    manager: Manager = f.manager
    dot = gv.Digraph(name=name)
    dot.attr(rankdir="TB")
    seen: set[int] = set()
    stack = [f.index]
    while stack:
        n = stack.pop()
        if n in seen:
            continue
        seen.add(n)
        if manager._level[n] == TERMINAL_LEVEL:
            dot.node(f"n{n}", label=str(to_json(manager._value[n])), shape="box")
            continue
        var = manager._level[n]
        dot.node(f"n{n}", label=manager.var_name(var), shape="circle")
        low, high = manager._low[n], manager._high[n]
        dot.edge(f"n{n}", f"n{low}", style="dashed")
        dot.edge(f"n{n}", f"n{high}")
        stack.extend((low, high))
    return dot.source


def write_dot(f: NodeRef, path: str | Path, name: str = "dd") -> Path:
    path = Path(path)
    path.write_text(to_dot(f, name))
    return path


def stats_json(manager: Manager, **extra) -> str:
    payload = dict(manager.stats())
    payload.update(extra)
    return json.dumps(payload, sort_keys=True)
