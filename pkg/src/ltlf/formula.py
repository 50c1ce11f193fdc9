"""
LTLf abstract syntax.

Nodes are frozen dataclasses so they hash structurally and can key memo
tables. `And`/`Or` are n-ary and built through `conj`/`disj`, which flatten,
deduplicate and sort their operands. `WeakNext` and `Release` only appear in
negation-normal form.
"""

from dataclasses import dataclass
from functools import lru_cache


class Formula:
    __slots__ = ()

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Bottom(Formula):
    pass


@dataclass(frozen=True)
class Atom(Formula):
    name: str


@dataclass(frozen=True)
class Not(Formula):
    arg: Formula


@dataclass(frozen=True)
class And(Formula):
    args: tuple[Formula, ...]


@dataclass(frozen=True)
class Or(Formula):
    args: tuple[Formula, ...]


@dataclass(frozen=True)
class Next(Formula):
    arg: Formula


@dataclass(frozen=True)
class WeakNext(Formula):
    arg: Formula


@dataclass(frozen=True)
class Until(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Release(Formula):
    left: Formula
    right: Formula


TRUE = Top()
FALSE = Bottom()


def sort_key(f: Formula) -> str:
    return to_text(f)


def conj(*args: Formula) -> Formula:
    flat: set[Formula] = set()
    for a in args:
        if isinstance(a, Bottom):
            return FALSE
        if isinstance(a, Top):
            continue
        if isinstance(a, And):
            flat.update(a.args)
        else:
            flat.add(a)
    if not flat:
        return TRUE
    if len(flat) == 1:
        return next(iter(flat))
    return And(tuple(sorted(flat, key=sort_key)))


def disj(*args: Formula) -> Formula:
    flat: set[Formula] = set()
    for a in args:
        if isinstance(a, Top):
            return TRUE
        if isinstance(a, Bottom):
            continue
        if isinstance(a, Or):
            flat.update(a.args)
        else:
            flat.add(a)
    if not flat:
        return FALSE
    if len(flat) == 1:
        return next(iter(flat))
    return Or(tuple(sorted(flat, key=sort_key)))


def eventually(f: Formula) -> Formula:
    return Until(TRUE, f)


def always(f: Formula) -> Formula:
    return Not(Until(TRUE, Not(f)))


def implies(a: Formula, b: Formula) -> Formula:
    return disj(Not(a), b)


# F(true) and G(false): "some position remains" and "no position remains"
NONEMPTY = Until(TRUE, TRUE)
EMPTY = Release(FALSE, FALSE)


@lru_cache(maxsize=None)
def atoms(f: Formula) -> frozenset[str]:
    if isinstance(f, Atom):
        return frozenset({f.name})
    if isinstance(f, (Top, Bottom)):
        return frozenset()
    if isinstance(f, (Not, Next, WeakNext)):
        return atoms(f.arg)
    if isinstance(f, (And, Or)):
        return frozenset().union(*(atoms(a) for a in f.args))
    if isinstance(f, (Until, Release)):
        return atoms(f.left) | atoms(f.right)
    raise TypeError(f"Unknown formula node {f!r}")


@lru_cache(maxsize=None)
def nnf(f: Formula) -> Formula:
    """Push negations down to atoms using the release and weak-next duals."""
    if isinstance(f, (Atom, Top, Bottom)):
        return f
    if isinstance(f, And):
        return conj(*(nnf(a) for a in f.args))
    if isinstance(f, Or):
        return disj(*(nnf(a) for a in f.args))
    if isinstance(f, Next):
        return Next(nnf(f.arg))
    if isinstance(f, WeakNext):
        return WeakNext(nnf(f.arg))
    if isinstance(f, Until):
        return Until(nnf(f.left), nnf(f.right))
    if isinstance(f, Release):
        return Release(nnf(f.left), nnf(f.right))
    if isinstance(f, Not):
        g = f.arg
        if isinstance(g, Atom):
            return f
        if isinstance(g, Top):
            return FALSE
        if isinstance(g, Bottom):
            return TRUE
        if isinstance(g, Not):
            return nnf(g.arg)
        if isinstance(g, And):
            return disj(*(nnf(Not(a)) for a in g.args))
        if isinstance(g, Or):
            return conj(*(nnf(Not(a)) for a in g.args))
        if isinstance(g, Next):
            return WeakNext(nnf(Not(g.arg)))
        if isinstance(g, WeakNext):
            return Next(nnf(Not(g.arg)))
        if isinstance(g, Until):
            return Release(nnf(Not(g.left)), nnf(Not(g.right)))
        if isinstance(g, Release):
            return Until(nnf(Not(g.left)), nnf(Not(g.right)))
    raise TypeError(f"Unknown formula node {f!r}")


@lru_cache(maxsize=None)
def to_text(f: Formula) -> str:
    """Render in the parser's concrete syntax (W and R for the internal duals)."""
    if isinstance(f, Top):
        return "true"
    if isinstance(f, Bottom):
        return "false"
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Not):
        return f"!{_wrap(f.arg)}"
    if isinstance(f, Next):
        return f"X{_wrap(f.arg)}"
    if isinstance(f, WeakNext):
        return f"WX{_wrap(f.arg)}"
    if isinstance(f, And):
        return " & ".join(_wrap(a) for a in f.args)
    if isinstance(f, Or):
        return " | ".join(_wrap(a) for a in f.args)
    if isinstance(f, Until):
        if isinstance(f.left, Top):
            return f"F{_wrap(f.right)}"
        return f"{_wrap(f.left)} U {_wrap(f.right)}"
    if isinstance(f, Release):
        return f"{_wrap(f.left)} R {_wrap(f.right)}"
    raise TypeError(f"Unknown formula node {f!r}")


def _wrap(f: Formula) -> str:
    text = to_text(f)
    if isinstance(f, (Atom, Top, Bottom)):
        return text
    return f"({text})"
