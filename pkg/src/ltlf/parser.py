"""
Recursive-descent parser for LTLf.

Precedence, lowest first: `->` (right-assoc) < `U` (right-assoc) < `|` < `&`
< unary `!`, `X`, `F`, `G`. `F` and `G` are rewritten to `U` on the way in.

Identifiers run together, so `GFp` is one token. When propositions are
declared and `GFp` is not one of them but `p` is, the leading X/F/G letters
are read as operators. Without declared propositions `GFp` stays an atom.
"""

import logging
import re
from typing import AbstractSet, Callable, Iterable

from src.exceptions import FormulaSyntaxError, UndeclaredAtomError
from src.ltlf.formula import (
    FALSE,
    TRUE,
    Atom,
    Formula,
    Next,
    Not,
    Until,
    always,
    atoms,
    conj,
    disj,
    eventually,
    implies,
)

logger = logging.getLogger(__name__)

_TOKEN = re.compile(
    r"\s*(?:(?P<arrow>->)|(?P<op>[!&|()])|(?P<ident>[a-zA-Z_][a-zA-Z0-9_,]*))"
)
_KEYWORDS = {"X", "F", "G", "U", "true", "false"}


def tokenize(text: str) -> list[tuple[str, int]]:
    tokens: list[tuple[str, int]] = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            start = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise FormulaSyntaxError(f"Unexpected character {text[start]!r}", start)
        kind = m.lastgroup
        value = m.group(kind)
        tokens.append((value, m.start(kind)))
        pos = m.end()
    return tokens


_PREFIX_OPS: dict[str, Callable[[Formula], Formula]] = {"X": Next, "F": eventually, "G": always}


def split_operator_prefix(ident: str, declared: AbstractSet[str]) -> tuple[str, str] | None:
    """(`GF`, `p`) for `GFp` when `p` is declared and `GFp` is not."""
    if ident in declared or ident in _KEYWORDS:
        return None
    i = 0
    while i < len(ident) and ident[i] in _PREFIX_OPS:
        i += 1
        if ident[i:] in declared:
            return ident[:i], ident[i:]
    return None


class _Parser:
    def __init__(self, text: str, declared: AbstractSet[str] | None = None):
        self.text = text
        self.declared = declared
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self) -> str | None:
        return self.tokens[self.i][0] if self.i < len(self.tokens) else None

    def position(self) -> int:
        return self.tokens[self.i][1] if self.i < len(self.tokens) else len(self.text)

    def advance(self) -> str:
        tok = self.tokens[self.i][0]
        self.i += 1
        return tok

    def expect(self, tok: str) -> None:
        if self.peek() != tok:
            found = self.peek() or "end of input"
            raise FormulaSyntaxError(f"Expected {tok!r}, found {found!r}", self.position())
        self.advance()

    def parse(self) -> Formula:
        if not self.tokens:
            raise FormulaSyntaxError("Empty formula", 0)
        f = self.implication()
        if self.peek() is not None:
            raise FormulaSyntaxError(f"Unexpected token {self.peek()!r}", self.position())
        return f

    def implication(self) -> Formula:
        left = self.until()
        if self.peek() == "->":
            self.advance()
            return implies(left, self.implication())
        return left

    def until(self) -> Formula:
        left = self.disjunction()
        if self.peek() == "U":
            self.advance()
            return Until(left, self.until())
        return left

    def disjunction(self) -> Formula:
        args = [self.conjunction()]
        while self.peek() == "|":
            self.advance()
            args.append(self.conjunction())
        return disj(*args) if len(args) > 1 else args[0]

    def conjunction(self) -> Formula:
        args = [self.unary()]
        while self.peek() == "&":
            self.advance()
            args.append(self.unary())
        return conj(*args) if len(args) > 1 else args[0]

    def unary(self) -> Formula:
        tok = self.peek()
        if tok == "!":
            self.advance()
            return Not(self.unary())
        if tok == "X":
            self.advance()
            return Next(self.unary())
        if tok == "F":
            self.advance()
            return eventually(self.unary())
        if tok == "G":
            self.advance()
            return always(self.unary())
        if tok is not None and self.declared is not None:
            split = split_operator_prefix(tok, self.declared)
            if split is not None:
                self.advance()
                ops, name = split
                f: Formula = Atom(name)
                for op in reversed(ops):
                    f = _PREFIX_OPS[op](f)
                return f
        return self.primary()

    def primary(self) -> Formula:
        tok = self.peek()
        if tok is None:
            raise FormulaSyntaxError("Unexpected end of input", self.position())
        if tok == "(":
            self.advance()
            f = self.implication()
            self.expect(")")
            return f
        if tok == "true":
            self.advance()
            return TRUE
        if tok == "false":
            self.advance()
            return FALSE
        if tok in _KEYWORDS or not (tok[0].isalpha() or tok[0] == "_"):
            raise FormulaSyntaxError(f"Unexpected token {tok!r}", self.position())
        self.advance()
        return Atom(tok)


def parse(text: str, propositions: Iterable[str] | None = None) -> Formula:
    """Parse text; when propositions are given every atom must be one of them."""
    declared = set(propositions) if propositions is not None else None
    formula = _Parser(text, declared).parse()
    if declared is not None:
        unknown = sorted(atoms(formula) - declared)
        if unknown:
            raise UndeclaredAtomError(
                f"Undeclared atoms {unknown}; declared propositions: {sorted(declared)}"
            )
    logger.debug(f"Parsed formula {formula}")
    return formula
