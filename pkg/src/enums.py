from enum import Enum


class ApplyOp(str, Enum):
    AND = "AND"
    OR = "OR"
    XOR = "XOR"
    PLUS = "PLUS"
    MIN = "MIN"
    MAX = "MAX"
    TIMES = "TIMES"
    # solver bookkeeping
    MINUS = "MINUS"
    EQUAL = "EQUAL"
    LESS = "LESS"


BOOLEAN_OPS = frozenset({ApplyOp.AND, ApplyOp.OR, ApplyOp.XOR})
COMMUTATIVE_OPS = frozenset(
    {
        ApplyOp.AND,
        ApplyOp.OR,
        ApplyOp.XOR,
        ApplyOp.PLUS,
        ApplyOp.MIN,
        ApplyOp.MAX,
        ApplyOp.TIMES,
        ApplyOp.EQUAL,
    }
)


class QuantifyMode(str, Enum):
    EXISTS = "EXISTS"
    FORALL = "FORALL"
    MIN_ABSTRACT = "MIN_ABSTRACT"
    MAX_ABSTRACT = "MAX_ABSTRACT"


class Region(str, Enum):
    ROBOT_ONLY = "robot-only"
    SHARED = "shared"
    HUMAN_REACHABLE = "human-reachable"


class Player(str, Enum):
    ROBOT = "robot"
    HUMAN = "human"


class SolverKind(str, Enum):
    EXPLICIT = "explicit"
    SYMBOLIC_MONOLITHIC = "symbolic-monolithic"
    SYMBOLIC_PARTITIONED = "symbolic-partitioned"


class Objective(str, Enum):
    MINMAX = "minmax"
    REGRET = "regret"


class PreMode(str, Enum):
    QUAL = "QUAL"
    QUANT = "QUANT"


class HumanPolicyKind(str, Enum):
    ADVERSARIAL = "adversarial"
    COOPERATIVE = "cooperative"
    RANDOM = "random"
    SCRIPTED = "scripted"


class RegretMode(str, Enum):
    ALL_ALTERNATES = "ALL_ALTERNATES"
    EXCLUDE_SELF = "EXCLUDE_SELF"


class Scenario(str, Enum):
    VARY_L = "vary-L"
    VARY_O = "vary-O"
    VARY_B = "vary-B"


class RunStatus(str, Enum):
    OK = "ok"
    INFEASIBLE = "infeasible"
    CAP_EXCEEDED = "cap-exceeded"
    SKIPPED = "skipped"
    MISMATCH = "mismatch"
    ERROR = "error"
