"""
Typed-STRIPS subset of PDDL.

Supported: :requirements :strips/:typing, :types, :constants, :predicates,
:action with a conjunction of positive atoms as precondition and add/delete
effects; problems with :objects, :init and a conjunctive positive :goal.
Anything else raises UnsupportedPddlFeature naming the construct.
"""

import logging
import re
from itertools import product
from pathlib import Path

from src.domain.strips import GroundAction, StripsTask, fact
from src.exceptions import SchemaViolationError, UngroundableParameterError, UnsupportedPddlFeature
from src.schema import CapsSchema

logger = logging.getLogger(__name__)

SExpr = str | list

_TOKEN = re.compile(r"[()]|[^\s()]+")
_SUPPORTED_REQUIREMENTS = {":strips", ":typing"}
_UNSUPPORTED_HEADS = {
    "or",
    "not",
    "imply",
    "forall",
    "exists",
    "when",
    "=",
    "<",
    ">",
    "<=",
    ">=",
    "increase",
    "decrease",
    "assign",
    "scale-up",
    "scale-down",
}
_UNSUPPORTED_SECTIONS = {":functions", ":derived", ":durative-action", ":metric", ":constraints"}


def tokenize(text: str) -> list[str]:
    text = re.sub(r";[^\n]*", "", text)
    return [t.lower() for t in _TOKEN.findall(text)]


def read_sexpr(text: str) -> list:
    tokens = tokenize(text)
    stack: list[list] = [[]]
    for tok in tokens:
        if tok == "(":
            stack.append([])
        elif tok == ")":
            if len(stack) == 1:
                raise SchemaViolationError("Unbalanced ')' in PDDL input")
            done = stack.pop()
            stack[-1].append(done)
        else:
            stack[-1].append(tok)
    if len(stack) != 1 or len(stack[0]) != 1 or not isinstance(stack[0][0], list):
        raise SchemaViolationError("PDDL input must be exactly one balanced (define ...) form")
    return stack[0][0]


def _typed_list(items: list[str], default: str = "object") -> list[tuple[str, str]]:
    """`a b - t c` -> [(a, t), (b, t), (c, object)]"""
    result: list[tuple[str, str]] = []
    pending: list[str] = []
    i = 0
    while i < len(items):
        tok = items[i]
        if isinstance(tok, list):
            raise UnsupportedPddlFeature(f"({tok[0] if tok else ''} ...) in typed list")
        if tok == "-":
            if i + 1 >= len(items) or isinstance(items[i + 1], list):
                raise UnsupportedPddlFeature("either-types")
            result.extend((name, items[i + 1]) for name in pending)
            pending = []
            i += 2
            continue
        pending.append(tok)
        i += 1
    result.extend((name, default) for name in pending)
    return result


class PddlDomain:
    def __init__(self, name: str):
        self.name = name
        self.parents: dict[str, str] = {}
        self.constants: list[tuple[str, str]] = []
        self.predicates: dict[str, int] = {}
        self.actions: list[dict] = []

    def is_subtype(self, t: str, ancestor: str) -> bool:
        seen = set()
        while t not in seen:
            if t == ancestor:
                return True
            seen.add(t)
            if t not in self.parents:
                break
            t = self.parents[t]
        return ancestor == "object"


def _atom(expr: SExpr, where: str) -> tuple[str, tuple[str, ...]]:
    if not isinstance(expr, list) or not expr or isinstance(expr[0], list):
        raise SchemaViolationError(f"Malformed atom in {where}: {expr!r}")
    head = expr[0]
    if head in _UNSUPPORTED_HEADS:
        raise UnsupportedPddlFeature(head)
    if any(isinstance(a, list) for a in expr[1:]):
        raise UnsupportedPddlFeature(f"nested term in ({head} ...)")
    return head, tuple(expr[1:])


def _conjunction(expr: SExpr, where: str) -> list[tuple[str, tuple[str, ...]]]:
    if expr == [] or expr is None:
        return []
    if isinstance(expr, list) and expr and expr[0] == "and":
        atoms = []
        for part in expr[1:]:
            atoms.extend(_conjunction(part, where))
        return atoms
    return [_atom(expr, where)]


def _effects(expr: SExpr, where: str) -> tuple[list, list]:
    adds, deletes = [], []
    parts = expr[1:] if isinstance(expr, list) and expr and expr[0] == "and" else [expr]
    for part in parts:
        if isinstance(part, list) and part and part[0] == "and":
            a, d = _effects(part, where)
            adds += a
            deletes += d
        elif isinstance(part, list) and part and part[0] == "not":
            if len(part) != 2:
                raise SchemaViolationError(f"Malformed (not ...) in {where}")
            deletes.append(_atom(part[1], where))
        else:
            adds.append(_atom(part, where))
    return adds, deletes


def parse_domain(text: str) -> PddlDomain:
    tree = read_sexpr(text)
    if tree[:1] != ["define"] or len(tree) < 2 or tree[1][:1] != ["domain"]:
        raise SchemaViolationError("Expected (define (domain NAME) ...)")
    domain = PddlDomain(tree[1][1])
    for section in tree[2:]:
        if not isinstance(section, list) or not section:
            raise SchemaViolationError(f"Malformed domain section {section!r}")
        key = section[0]
        if key in _UNSUPPORTED_SECTIONS:
            raise UnsupportedPddlFeature(key)
        if key == ":requirements":
            for req in section[1:]:
                if req not in _SUPPORTED_REQUIREMENTS:
                    raise UnsupportedPddlFeature(req)
        elif key == ":types":
            for name, parent in _typed_list(section[1:]):
                domain.parents[name] = parent
        elif key == ":constants":
            domain.constants.extend(_typed_list(section[1:]))
        elif key == ":predicates":
            for pred in section[1:]:
                domain.predicates[pred[0]] = len(_typed_list(pred[1:]))
        elif key == ":action":
            domain.actions.append(_parse_action(section))
        else:
            raise UnsupportedPddlFeature(key)
    return domain


def _parse_action(section: list) -> dict:
    name = section[1]
    fields = {section[i]: section[i + 1] for i in range(2, len(section) - 1, 2)}
    unknown = set(fields) - {":parameters", ":precondition", ":effect"}
    if unknown:
        raise UnsupportedPddlFeature(sorted(unknown)[0])
    where = f"action {name}"
    adds, deletes = _effects(fields.get(":effect", []), where)
    return {
        "name": name,
        "parameters": _typed_list(fields.get(":parameters", [])),
        "pre": _conjunction(fields.get(":precondition", []), where),
        "add": adds,
        "delete": deletes,
    }


def parse_problem(text: str) -> dict:
    tree = read_sexpr(text)
    if tree[:1] != ["define"] or len(tree) < 2 or tree[1][:1] != ["problem"]:
        raise SchemaViolationError("Expected (define (problem NAME) ...)")
    problem = {"name": tree[1][1], "objects": [], "init": [], "goal": []}
    for section in tree[2:]:
        key = section[0]
        if key == ":domain":
            problem["domain"] = section[1]
        elif key == ":objects":
            problem["objects"] = _typed_list(section[1:])
        elif key == ":init":
            problem["init"] = [_atom(a, ":init") for a in section[1:]]
        elif key == ":goal":
            problem["goal"] = _conjunction(section[1], ":goal")
        elif key == ":requirements":
            for req in section[1:]:
                if req not in _SUPPORTED_REQUIREMENTS:
                    raise UnsupportedPddlFeature(req)
        else:
            raise UnsupportedPddlFeature(key)
    return problem


def _ground_atoms(atoms: list, binding: dict[str, str]) -> frozenset[str]:
    return frozenset(fact(pred, *(binding.get(a, a) for a in args)) for pred, args in atoms)


def ground(domain: PddlDomain, problem: dict, caps: CapsSchema) -> StripsTask:
    objects = domain.constants + problem["objects"]
    human_schemas = set(caps.human_actions)
    known = {a["name"] for a in domain.actions}
    missing = sorted(human_schemas - known)
    if missing:
        raise SchemaViolationError(f"Capability file names unknown actions {missing}", pointer="/human_actions")

    robot, human = [], []
    for action in domain.actions:
        candidates = []
        for var, typ in action["parameters"]:
            objs = [o for o, t in objects if domain.is_subtype(t, typ)]
            if not objs:
                raise UngroundableParameterError(
                    f"Parameter {var} of {action['name']} has no object of type {typ}"
                )
            candidates.append(objs)
        names = [var for var, _ in action["parameters"]]
        is_human = action["name"] in human_schemas
        cost = 0 if is_human else caps.costs.get(action["name"], caps.default_cost)
        for combo in product(*candidates):
            binding = dict(zip(names, combo))
            ga = GroundAction(
                schema=action["name"],
                args=tuple(combo),
                pre=_ground_atoms(action["pre"], binding),
                add=_ground_atoms(action["add"], binding),
                delete=_ground_atoms(action["delete"], binding),
                cost=cost,
            )
            (human if is_human else robot).append(ga)

    task = StripsTask(
        name=problem["name"],
        init=_ground_atoms(problem["init"], {}),
        goal=_ground_atoms(problem["goal"], {}),
        robot_actions=robot,
        human_actions=human,
        objects=tuple(o for o, _ in objects),
    )
    logger.info(
        f"Grounded PDDL problem '{task.name}': {len(robot)} robot actions, "
        f"{len(human)} human actions, {len(task.facts)} facts"
    )
    return task


def parse_pddl(domain_text: str, problem_text: str, human_caps: CapsSchema | None = None) -> StripsTask:
    return ground(parse_domain(domain_text), parse_problem(problem_text), human_caps or CapsSchema())


def load_pddl(domain_path: str | Path, problem_path: str | Path, caps_path: str | Path | None = None) -> StripsTask:
    caps = CapsSchema()
    if caps_path is not None:
        caps = CapsSchema.model_validate_json(Path(caps_path).read_text())
    return parse_pddl(Path(domain_path).read_text(), Path(problem_path).read_text(), caps)
