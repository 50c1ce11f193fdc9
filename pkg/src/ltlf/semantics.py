"""
Finite-trace semantics and formula progression.

Progression works on a canonical disjunctive normal form: a set of clauses,
each clause a set of temporal literals (atoms, negated atoms, X, WX, U, R
nodes). `{frozenset()}` is true, the empty set is false.
"""

from functools import lru_cache
from typing import AbstractSet, Collection, Sequence

from src.ltlf.formula import (
    EMPTY,
    FALSE,
    NONEMPTY,
    TRUE,
    And,
    Atom,
    Bottom,
    Formula,
    Next,
    Not,
    Or,
    Release,
    Top,
    Until,
    WeakNext,
    conj,
    disj,
    nnf,
    sort_key,
)

Clause = frozenset[Formula]
Dnf = frozenset[Clause]

DNF_TRUE: Dnf = frozenset({frozenset()})
DNF_FALSE: Dnf = frozenset()


def evaluate(formula: Formula, trace: Sequence[Collection[str]]) -> bool:
    """rho |= formula under the standard finite-trace semantics."""
    n = len(trace)
    if n == 0:
        return final_eval(formula)
    letters = [frozenset(step) for step in trace]

    @lru_cache(maxsize=None)
    def sat(f: Formula, i: int) -> bool:
        if isinstance(f, Top):
            return True
        if isinstance(f, Bottom):
            return False
        if isinstance(f, Atom):
            return f.name in letters[i]
        if isinstance(f, Not):
            return not sat(f.arg, i)
        if isinstance(f, And):
            return all(sat(a, i) for a in f.args)
        if isinstance(f, Or):
            return any(sat(a, i) for a in f.args)
        if isinstance(f, Next):
            return i + 1 < n and sat(f.arg, i + 1)
        if isinstance(f, WeakNext):
            return i + 1 >= n or sat(f.arg, i + 1)
        if isinstance(f, Until):
            for j in range(i, n):
                if sat(f.right, j):
                    return True
                if not sat(f.left, j):
                    return False
            return False
        if isinstance(f, Release):
            for j in range(i, n):
                if not sat(f.right, j):
                    return False
                if sat(f.left, j):
                    return True
            return True
        raise TypeError(f"Unknown formula node {f!r}")

    return sat(formula, 0)


def final_eval(formula: Formula) -> bool:
    """Truth value on the empty trace."""
    return dnf_final(to_dnf(nnf(formula)))


def _literal_final(lit: Formula) -> bool:
    # atoms, X and U need a position; negated atoms, WX and R hold vacuously
    return isinstance(lit, (Not, WeakNext, Release))


def dnf_final(d: Dnf) -> bool:
    return any(all(_literal_final(lit) for lit in clause) for clause in d)


def _complementary(clause: Clause) -> bool:
    for lit in clause:
        if isinstance(lit, Not) and lit.arg in clause:
            return True
    return NONEMPTY in clause and EMPTY in clause


def _simplify(clauses: set[Clause]) -> Dnf:
    kept = [c for c in clauses if not _complementary(c)]
    kept.sort(key=len)
    result: list[Clause] = []
    for c in kept:
        if not any(r <= c for r in result):
            result.append(c)
    return frozenset(result)


def dnf_or(*ds: Dnf) -> Dnf:
    return _simplify(set().union(*ds))


def dnf_and(*ds: Dnf) -> Dnf:
    acc: set[Clause] = {frozenset()}
    for d in ds:
        acc = {a | b for a in acc for b in d}
        if not acc:
            return DNF_FALSE
    return _simplify(acc)


def _literal(f: Formula) -> Dnf:
    return frozenset({frozenset({f})})


@lru_cache(maxsize=None)
def to_dnf(f: Formula) -> Dnf:
    """DNF of a formula already in negation-normal form."""
    if isinstance(f, Top):
        return DNF_TRUE
    if isinstance(f, Bottom):
        return DNF_FALSE
    if isinstance(f, And):
        return dnf_and(*(to_dnf(a) for a in f.args))
    if isinstance(f, Or):
        return dnf_or(*(to_dnf(a) for a in f.args))
    return _literal(f)


def from_dnf(d: Dnf) -> Formula:
    return disj(*(conj(*sorted(clause, key=sort_key)) for clause in d))


@lru_cache(maxsize=None)
def _progress_literal(lit: Formula, letter: frozenset[str]) -> Dnf:
    if isinstance(lit, Atom):
        return DNF_TRUE if lit.name in letter else DNF_FALSE
    if isinstance(lit, Not):
        return DNF_FALSE if lit.arg.name in letter else DNF_TRUE
    if isinstance(lit, Next):
        # F(true) must stay a literal: it is what makes X strict on the last position
        return dnf_and(to_dnf(lit.arg), _literal(NONEMPTY))
    if isinstance(lit, WeakNext):
        return dnf_or(to_dnf(lit.arg), _literal(EMPTY))
    if isinstance(lit, Until):
        right = progress_dnf(to_dnf(lit.right), letter)
        left = progress_dnf(to_dnf(lit.left), letter)
        return dnf_or(right, dnf_and(left, _literal(lit)))
    if isinstance(lit, Release):
        right = progress_dnf(to_dnf(lit.right), letter)
        left = progress_dnf(to_dnf(lit.left), letter)
        return dnf_and(right, dnf_or(left, _literal(lit)))
    raise TypeError(f"Not a temporal literal: {lit!r}")


@lru_cache(maxsize=None)
def progress_dnf(d: Dnf, letter: frozenset[str]) -> Dnf:
    clauses = [dnf_and(*(_progress_literal(lit, letter) for lit in clause)) for clause in d]
    return dnf_or(DNF_FALSE, *clauses)


def progress(formula: Formula, letter: AbstractSet[str]) -> Formula:
    """Obligation left after reading one letter, in canonical form."""
    return from_dnf(progress_dnf(to_dnf(nnf(formula)), frozenset(letter)))


def accepts_by_progression(formula: Formula, trace: Sequence[Collection[str]]) -> bool:
    d = to_dnf(nnf(formula))
    for step in trace:
        d = progress_dnf(d, frozenset(step))
    return dnf_final(d)


__all__ = [
    "DNF_FALSE",
    "DNF_TRUE",
    "FALSE",
    "TRUE",
    "accepts_by_progression",
    "dnf_final",
    "evaluate",
    "final_eval",
    "from_dnf",
    "progress",
    "progress_dnf",
    "to_dnf",
]
