"""
Reduced ordered decision diagrams with boolean and numeric terminals.

A ``Manager`` owns the hash-consed unique table and the operation caches.
Variables are identified by their position in the global order, which is the
order of creation and never changes. Handles (``NodeRef``) are only valid for
the manager that produced them.
"""

import logging
import sys
from typing import Callable, Iterable, Iterator, Mapping, Sequence

from src.ddlib.terminals import INFINITY, Value, normalize
from src.enums import BOOLEAN_OPS, COMMUTATIVE_OPS, ApplyOp, QuantifyMode
from src.exceptions import (
    DuplicateSubstitutionError,
    IncompleteAssignmentError,
    ManagerMismatchError,
    NonBooleanOperandError,
    VariableBudgetExceeded,
)

logger = logging.getLogger(__name__)

TERMINAL_LEVEL = sys.maxsize
_FREE = -1

ZERO_INDEX = 0
ONE_INDEX = 1


class NodeRef:
    """Handle to a canonical node. Equal handles mean equal functions."""

    __slots__ = ("manager", "index")

    def __init__(self, manager: "Manager", index: int):
        self.manager = manager
        self.index = index

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, NodeRef)
            and other.manager is self.manager
            and other.index == self.index
        )

    def __hash__(self) -> int:
        return hash((id(self.manager), self.index))

    def __repr__(self) -> str:
        if self.is_terminal:
            return f"NodeRef(terminal={self.value!r})"
        return f"NodeRef(#{self.index}, var={self.var})"

    def __and__(self, other: "NodeRef") -> "NodeRef":
        return self.manager.apply(ApplyOp.AND, self, other)

    def __or__(self, other: "NodeRef") -> "NodeRef":
        return self.manager.apply(ApplyOp.OR, self, other)

    def __xor__(self, other: "NodeRef") -> "NodeRef":
        return self.manager.apply(ApplyOp.XOR, self, other)

    def __invert__(self) -> "NodeRef":
        return self.manager.negate(self)

    @property
    def is_terminal(self) -> bool:
        return self.manager._level[self.index] == TERMINAL_LEVEL

    @property
    def value(self) -> Value:
        return self.manager._value[self.index]

    @property
    def var(self) -> int:
        return self.manager._level[self.index]

    @property
    def low(self) -> "NodeRef":
        return NodeRef(self.manager, self.manager._low[self.index])

    @property
    def high(self) -> "NodeRef":
        return NodeRef(self.manager, self.manager._high[self.index])


def _combine(op: ApplyOp, a: Value, b: Value) -> Value:
    if op is ApplyOp.AND:
        return 1 if (a and b) else 0
    if op is ApplyOp.OR:
        return 1 if (a or b) else 0
    if op is ApplyOp.XOR:
        return int(a) ^ int(b)
    if op is ApplyOp.PLUS:
        return a + b
    if op is ApplyOp.MIN:
        return a if a <= b else b
    if op is ApplyOp.MAX:
        return a if a >= b else b
    if op is ApplyOp.TIMES:
        if a == 0 or b == 0:
            return 0
        if a is INFINITY or b is INFINITY:
            return INFINITY
        return a * b
    if op is ApplyOp.MINUS:
        return a - b
    if op is ApplyOp.EQUAL:
        return 1 if a == b else 0
    if op is ApplyOp.LESS:
        return 1 if a < b else 0
    raise ValueError(f"Unknown apply operator {op}")


_QUANT_COMBINER = {
    QuantifyMode.EXISTS: ApplyOp.OR,
    QuantifyMode.FORALL: ApplyOp.AND,
    QuantifyMode.MIN_ABSTRACT: ApplyOp.MIN,
    QuantifyMode.MAX_ABSTRACT: ApplyOp.MAX,
}


class Manager:
    """Unique table, operation caches and variable order for one family of diagrams."""

    def __init__(self, max_vars: int | None = None, cache: bool = True):
        self.max_vars = max_vars
        self.cache_enabled = cache

        self._level: list[int] = []
        self._low: list[int] = []
        self._high: list[int] = []
        self._value: list[Value | None] = []
        self._boolean: list[bool] = []
        self._free: list[int] = []

        self._unique: dict[tuple[int, int, int], int] = {}
        self._terminals: dict[Value, int] = {}
        self._apply_cache: dict[tuple, int] = {}
        self._ite_cache: dict[tuple[int, int, int], int] = {}
        self._quant_cache: dict[tuple, int] = {}

        self._var_names: list[str] = []
        self._literals: list[int] = []

        self.cache_hits = 0
        self.cache_misses = 0
        self.peak_live = 0
        self.gc_runs = 0

        assert self._terminal(0) == ZERO_INDEX
        assert self._terminal(1) == ONE_INDEX

    # ----------------------
    # Node store
    # ----------------------
    def _alloc(self, level: int, low: int, high: int, value: Value | None, boolean: bool) -> int:
        if self._free:
            idx = self._free.pop()
            self._level[idx] = level
            self._low[idx] = low
            self._high[idx] = high
            self._value[idx] = value
            self._boolean[idx] = boolean
        else:
            idx = len(self._level)
            self._level.append(level)
            self._low.append(low)
            self._high.append(high)
            self._value.append(value)
            self._boolean.append(boolean)
        live = self.live_nodes
        if live > self.peak_live:
            self.peak_live = live
        return idx

    def _terminal(self, value) -> int:
        value = normalize(value)
        idx = self._terminals.get(value)
        if idx is None:
            idx = self._alloc(TERMINAL_LEVEL, -1, -1, value, value == 0 or value == 1)
            self._terminals[value] = idx
        return idx

    def _mk(self, level: int, low: int, high: int) -> int:
        if low == high:
            return low
        key = (level, low, high)
        idx = self._unique.get(key)
        if idx is None:
            boolean = self._boolean[low] and self._boolean[high]
            idx = self._alloc(level, low, high, None, boolean)
            self._unique[key] = idx
        return idx

    def _ref(self, idx: int) -> NodeRef:
        return NodeRef(self, idx)

    def _h(self, ref: NodeRef) -> int:
        if not isinstance(ref, NodeRef) or ref.manager is not self:
            raise ManagerMismatchError()
        return ref.index

    @property
    def live_nodes(self) -> int:
        return len(self._level) - len(self._free)

    # ----------------------
    # Constants and variables
    # ----------------------
    @property
    def zero(self) -> NodeRef:
        return self._ref(ZERO_INDEX)

    @property
    def one(self) -> NodeRef:
        return self._ref(ONE_INDEX)

    @property
    def infinity(self) -> NodeRef:
        return self._ref(self._terminal(INFINITY))

    def constant(self, value) -> NodeRef:
        return self._ref(self._terminal(value))

    @property
    def var_count(self) -> int:
        return len(self._var_names)

    def var_name(self, index: int) -> str:
        return self._var_names[index]

    def new_var(self, name: str | None = None) -> NodeRef:
        """Allocate the next variable in the order and return its literal."""
        index = len(self._var_names)
        if self.max_vars is not None and index >= self.max_vars:
            raise VariableBudgetExceeded(
                f"Variable budget of {self.max_vars} exceeded while allocating '{name}'"
            )
        self._var_names.append(name or f"x{index}")
        literal = self._mk(index, ZERO_INDEX, ONE_INDEX)
        self._literals.append(literal)
        return self._ref(literal)

    def var_ref(self, index: int) -> NodeRef:
        return self._ref(self._literals[index])

    def is_boolean(self, f: NodeRef) -> bool:
        return self._boolean[self._h(f)]

    def _require_boolean(self, *refs: NodeRef) -> None:
        for ref in refs:
            if not self._boolean[self._h(ref)]:
                raise NonBooleanOperandError()

    # ----------------------
    # Apply family
    # ----------------------
    def apply(self, op: ApplyOp, f: NodeRef, g: NodeRef) -> NodeRef:
        """Pointwise combination of f and g under op."""
        op = ApplyOp(op)
        fi, gi = self._h(f), self._h(g)
        if op in BOOLEAN_OPS:
            self._require_boolean(f, g)
        return self._ref(self._apply(op, fi, gi))

    def _apply(self, op: ApplyOp, f: int, g: int) -> int:
        shortcut = self._apply_shortcut(op, f, g)
        if shortcut is not None:
            return shortcut
        lf, lg = self._level[f], self._level[g]
        if lf == TERMINAL_LEVEL and lg == TERMINAL_LEVEL:
            return self._terminal(_combine(op, self._value[f], self._value[g]))
        if op in COMMUTATIVE_OPS and f > g:
            f, g = g, f
            lf, lg = lg, lf
        key = (op, f, g)
        if self.cache_enabled:
            hit = self._apply_cache.get(key)
            if hit is not None:
                self.cache_hits += 1
                return hit
            self.cache_misses += 1
        top = lf if lf < lg else lg
        f0, f1 = (self._low[f], self._high[f]) if lf == top else (f, f)
        g0, g1 = (self._low[g], self._high[g]) if lg == top else (g, g)
        result = self._mk(top, self._apply(op, f0, g0), self._apply(op, f1, g1))
        if self.cache_enabled:
            self._apply_cache[key] = result
        return result

    def _apply_shortcut(self, op: ApplyOp, f: int, g: int) -> int | None:
        if op is ApplyOp.AND:
            if f == ZERO_INDEX or g == ZERO_INDEX:
                return ZERO_INDEX
            if f == ONE_INDEX or f == g:
                return g
            if g == ONE_INDEX:
                return f
        elif op is ApplyOp.OR:
            if f == ONE_INDEX or g == ONE_INDEX:
                return ONE_INDEX
            if f == ZERO_INDEX or f == g:
                return g
            if g == ZERO_INDEX:
                return f
        elif op is ApplyOp.XOR:
            if f == g:
                return ZERO_INDEX
            if f == ZERO_INDEX:
                return g
            if g == ZERO_INDEX:
                return f
        elif op is ApplyOp.MIN or op is ApplyOp.MAX:
            if f == g:
                return f
        elif op is ApplyOp.PLUS:
            if f == ZERO_INDEX:
                return g
            if g == ZERO_INDEX:
                return f
        elif op is ApplyOp.TIMES:
            if f == ONE_INDEX:
                return g
            if g == ONE_INDEX:
                return f
        elif op is ApplyOp.EQUAL:
            if f == g:
                return ONE_INDEX
        return None

    def negate(self, f: NodeRef) -> NodeRef:
        """Pointwise boolean complement."""
        self._require_boolean(f)
        return self._ref(self._ite(self._h(f), ZERO_INDEX, ONE_INDEX))

    def ite(self, f: NodeRef, g: NodeRef, h: NodeRef) -> NodeRef:
        """Pointwise if-then-else with boolean guard f; g and h may be numeric."""
        self._require_boolean(f)
        return self._ref(self._ite(self._h(f), self._h(g), self._h(h)))

    def _ite(self, f: int, g: int, h: int) -> int:
        if f == ONE_INDEX:
            return g
        if f == ZERO_INDEX:
            return h
        if g == h:
            return g
        if g == ONE_INDEX and h == ZERO_INDEX:
            return f
        key = (f, g, h)
        if self.cache_enabled:
            hit = self._ite_cache.get(key)
            if hit is not None:
                self.cache_hits += 1
                return hit
            self.cache_misses += 1
        lf, lg, lh = self._level[f], self._level[g], self._level[h]
        top = min(lf, lg, lh)
        f0, f1 = (self._low[f], self._high[f]) if lf == top else (f, f)
        g0, g1 = (self._low[g], self._high[g]) if lg == top else (g, g)
        h0, h1 = (self._low[h], self._high[h]) if lh == top else (h, h)
        result = self._mk(top, self._ite(f0, g0, h0), self._ite(f1, g1, h1))
        if self.cache_enabled:
            self._ite_cache[key] = result
        return result

    def map_terminals(self, f: NodeRef, fn: Callable[[Value], Value]) -> NodeRef:
        """Replace every terminal value v of f by fn(v)."""
        memo: dict[int, int] = {}

        def walk(n: int) -> int:
            if n in memo:
                return memo[n]
            if self._level[n] == TERMINAL_LEVEL:
                r = self._terminal(fn(self._value[n]))
            else:
                r = self._mk(self._level[n], walk(self._low[n]), walk(self._high[n]))
            memo[n] = r
            return r

        return self._ref(walk(self._h(f)))

    # ----------------------
    # Substitution
    # ----------------------
    def cofactor(self, f: NodeRef, var: int, value: bool) -> NodeRef:
        return self._ref(self._cofactor(self._h(f), var, value))

    def _cofactor(self, f: int, var: int, value: bool) -> int:
        memo: dict[int, int] = {}

        def walk(n: int) -> int:
            lvl = self._level[n]
            if lvl > var:
                return n
            if lvl == var:
                return self._high[n] if value else self._low[n]
            if n in memo:
                return memo[n]
            r = self._mk(lvl, walk(self._low[n]), walk(self._high[n]))
            memo[n] = r
            return r

        return walk(f)

    def compose(self, f: NodeRef, var: int, g: NodeRef) -> NodeRef:
        """f with variable var replaced pointwise by the boolean function g."""
        self._require_boolean(g)
        fi, gi = self._h(f), self._h(g)
        return self._ref(
            self._ite(gi, self._cofactor(fi, var, True), self._cofactor(fi, var, False))
        )

    def vector_compose(self, f: NodeRef, subst: Sequence[tuple[int, NodeRef]]) -> NodeRef:
        """Simultaneous substitution of every listed variable."""
        mapping: dict[int, int] = {}
        for var, g in subst:
            if var in mapping:
                raise DuplicateSubstitutionError(f"Variable {var} substituted twice")
            self._require_boolean(g)
            mapping[var] = self._h(g)
        fi = self._h(f)
        if not mapping:
            return f
        deepest = max(mapping)
        memo: dict[int, int] = {}

        def walk(n: int) -> int:
            lvl = self._level[n]
            if lvl > deepest:
                return n
            if n in memo:
                return memo[n]
            lo = walk(self._low[n])
            hi = walk(self._high[n])
            guard = mapping.get(lvl, self._literals[lvl])
            r = self._ite(guard, hi, lo)
            memo[n] = r
            return r

        return self._ref(walk(fi))

    # ----------------------
    # Quantification
    # ----------------------
    def quantify(self, mode: QuantifyMode, f: NodeRef, vars: Iterable[int]) -> NodeRef:
        """Eliminate vars from f under OR / AND / MIN / MAX of the two cofactors."""
        mode = QuantifyMode(mode)
        if mode in (QuantifyMode.EXISTS, QuantifyMode.FORALL):
            self._require_boolean(f)
        var_set = frozenset(vars)
        fi = self._h(f)
        if not var_set:
            return f
        combiner = _QUANT_COMBINER[mode]
        deepest = max(var_set)
        memo: dict[int, int] = {}

        def walk(n: int) -> int:
            lvl = self._level[n]
            if lvl > deepest:
                return n
            if n in memo:
                return memo[n]
            key = (mode, n, var_set)
            if self.cache_enabled:
                hit = self._quant_cache.get(key)
                if hit is not None:
                    self.cache_hits += 1
                    memo[n] = hit
                    return hit
                self.cache_misses += 1
            lo = walk(self._low[n])
            hi = walk(self._high[n])
            if lvl in var_set:
                r = self._apply(combiner, lo, hi)
            else:
                r = self._mk(lvl, lo, hi)
            memo[n] = r
            if self.cache_enabled:
                self._quant_cache[key] = r
            return r

        return self._ref(walk(fi))

    def exists(self, vars: Iterable[int], f: NodeRef) -> NodeRef:
        return self.quantify(QuantifyMode.EXISTS, f, vars)

    def forall(self, vars: Iterable[int], f: NodeRef) -> NodeRef:
        return self.quantify(QuantifyMode.FORALL, f, vars)

    # ----------------------
    # Construction helpers
    # ----------------------
    def cube(self, vars: Sequence[int], bits: Sequence[bool]) -> NodeRef:
        """Conjunction of literals: vars[k] is positive iff bits[k]."""
        pairs = sorted(zip(vars, bits), reverse=True)
        node = ONE_INDEX
        for var, bit in pairs:
            node = self._mk(var, ZERO_INDEX, node) if bit else self._mk(var, node, ZERO_INDEX)
        return self._ref(node)

    def from_table(
        self,
        vars: Sequence[int],
        table: Mapping[tuple, Value] | Iterable[tuple[tuple, Value]],
        default: Value = 0,
    ) -> NodeRef:
        """Build the diagram over vars that maps each listed assignment to its value."""
        order = sorted(range(len(vars)), key=lambda k: vars[k])
        levels = [vars[k] for k in order]
        items_src = table.items() if isinstance(table, Mapping) else table
        rows: dict[tuple, Value] = {}
        for bits, value in items_src:
            rows[tuple(bool(bits[k]) for k in order)] = value
        default_idx = self._terminal(default)

        def build(depth: int, items: list[tuple[tuple, Value]]) -> int:
            if not items:
                return default_idx
            if depth == len(levels):
                return self._terminal(items[-1][1])
            lows = [it for it in items if not it[0][depth]]
            highs = [it for it in items if it[0][depth]]
            return self._mk(levels[depth], build(depth + 1, lows), build(depth + 1, highs))

        return self._ref(build(0, list(rows.items())))

    # ----------------------
    # Inspection
    # ----------------------
    def eval(self, f: NodeRef, assignment: Mapping[int, bool]) -> Value:
        n = self._h(f)
        while self._level[n] != TERMINAL_LEVEL:
            lvl = self._level[n]
            if lvl not in assignment:
                raise IncompleteAssignmentError(f"Variable {lvl} ({self._var_names[lvl]}) unassigned")
            n = self._high[n] if assignment[lvl] else self._low[n]
        return self._value[n]

    def _reachable(self, roots: Iterable[int]) -> set[int]:
        seen: set[int] = set()
        stack = list(roots)
        while stack:
            n = stack.pop()
            if n in seen:
                continue
            seen.add(n)
            if self._level[n] != TERMINAL_LEVEL:
                stack.append(self._low[n])
                stack.append(self._high[n])
        return seen

    def node_count(self, *fs: NodeRef) -> int:
        return len(self._reachable(self._h(f) for f in fs))

    def terminals(self, f: NodeRef) -> set[Value]:
        return {
            self._value[n]
            for n in self._reachable([self._h(f)])
            if self._level[n] == TERMINAL_LEVEL
        }

    def support(self, f: NodeRef) -> set[int]:
        return {
            self._level[n]
            for n in self._reachable([self._h(f)])
            if self._level[n] != TERMINAL_LEVEL
        }

    def iter_assignments(
        self, f: NodeRef, vars: Sequence[int], skip_zero: bool = True
    ) -> Iterator[tuple[dict[int, bool], Value]]:
        """Yield every assignment over vars with the value f takes there."""
        levels = sorted(vars)
        fi = self._h(f)
        missing = self.support(f) - set(levels)
        if missing:
            raise IncompleteAssignmentError(f"Support variables {sorted(missing)} not enumerated")

        def walk(n: int, depth: int, acc: dict[int, bool]):
            if skip_zero and n == ZERO_INDEX:
                return
            if depth == len(levels):
                yield dict(acc), self._value[n]
                return
            var = levels[depth]
            if self._level[n] == var:
                branches = ((False, self._low[n]), (True, self._high[n]))
            else:
                branches = ((False, n), (True, n))
            for bit, child in branches:
                acc[var] = bit
                yield from walk(child, depth + 1, acc)
                del acc[var]

        yield from walk(fi, 0, {})

    def sat_count(self, f: NodeRef, vars: Sequence[int]) -> int:
        """Number of assignments over vars on which f is non-zero."""
        levels = sorted(vars)
        fi = self._h(f)
        missing = self.support(f) - set(levels)
        if missing:
            raise IncompleteAssignmentError(f"Support variables {sorted(missing)} not counted")
        position = {v: k for k, v in enumerate(levels)}
        depth = len(levels)
        memo: dict[int, int] = {}

        def pos(n: int) -> int:
            return depth if self._level[n] == TERMINAL_LEVEL else position[self._level[n]]

        def walk(n: int) -> int:
            if self._level[n] == TERMINAL_LEVEL:
                return 0 if n == ZERO_INDEX else 1
            if n in memo:
                return memo[n]
            here = pos(n)
            total = 0
            for child in (self._low[n], self._high[n]):
                total += walk(child) << (pos(child) - here - 1)
            memo[n] = total
            return total

        return walk(fi) << pos(fi)

    def sat_iter(self, f: NodeRef, vars: Sequence[int]) -> Iterator[dict[int, bool]]:
        for assignment, _ in self.iter_assignments(f, vars, skip_zero=True):
            yield assignment

    def pick_smallest(self, f: NodeRef, vars: Sequence[int]) -> NodeRef:
        """Keep, for every assignment of the other variables, only the smallest code over vars.

        vars is read most-significant bit first.
        """
        self._require_boolean(f)
        block = list(vars)
        for var in block:
            lit = self.var_ref(var)
            with_zero = self.exists(block, f & ~lit)
            f = f & (~lit | ~with_zero)
        return f

    # ----------------------
    # Housekeeping
    # ----------------------
    def collect_garbage(self, roots: Iterable[NodeRef]) -> int:
        """Free every node not reachable from roots. Other handles become invalid."""
        keep = [self._h(r) for r in roots] + list(self._literals)
        keep += [ZERO_INDEX, ONE_INDEX]
        if INFINITY in self._terminals:
            keep.append(self._terminals[INFINITY])
        marked = self._reachable(keep)
        freed = 0
        free_set = set(self._free)
        for idx in range(len(self._level)):
            if idx in marked or idx in free_set:
                continue
            if self._level[idx] == TERMINAL_LEVEL:
                del self._terminals[self._value[idx]]
            else:
                del self._unique[(self._level[idx], self._low[idx], self._high[idx])]
            self._level[idx] = _FREE
            self._value[idx] = None
            self._free.append(idx)
            freed += 1
        self._apply_cache.clear()
        self._ite_cache.clear()
        self._quant_cache.clear()
        self.gc_runs += 1
        logger.debug(f"GC freed {freed} nodes, {self.live_nodes} live")
        return freed

    def stats(self) -> dict:
        lookups = self.cache_hits + self.cache_misses
        return {
            "vars": self.var_count,
            "live_nodes": self.live_nodes,
            "peak_live_nodes": self.peak_live,
            "unique_table": len(self._unique),
            "cache_hits": self.cache_hits,
            "cache_misses": self.cache_misses,
            "cache_hit_rate": (self.cache_hits / lookups) if lookups else 0.0,
            "gc_runs": self.gc_runs,
        }
