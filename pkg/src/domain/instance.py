"""
Native JSON manipulation instances: loading, validation, serialization and
compilation to the grounded STRIPS model.
"""

import json
import logging
from dataclasses import dataclass
from pathlib import Path

from pydantic import ValidationError

from src.domain.strips import GroundAction, StripsTask, fact
from src.enums import Region
from src.exceptions import DanglingIdError, SchemaViolationError
from src.schema import InstanceSchema

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ManipInstance:
    """A validated instance; `schema` is the parsed file."""

    schema: InstanceSchema

    @property
    def name(self) -> str:
        return self.schema.name

    @property
    def location_ids(self) -> list[str]:
        return [loc.id for loc in self.schema.locations]

    @property
    def object_ids(self) -> list[str]:
        return [obj.id for obj in self.schema.objects]

    @property
    def movable_ids(self) -> list[str]:
        return [obj.id for obj in self.schema.objects if obj.movable]

    def region(self, location: str) -> Region:
        return next(loc.region for loc in self.schema.locations if loc.id == location)

    def human_locations(self) -> list[str]:
        return [loc.id for loc in self.schema.locations if loc.region == Region.HUMAN_REACHABLE]

    def shared_locations(self) -> list[str]:
        return [loc.id for loc in self.schema.locations if loc.region == Region.SHARED]

    def placement_propositions(self) -> list[str]:
        return [f"p_{o},{l}" for o in self.object_ids for l in self.location_ids]

    def to_json(self) -> str:
        return json.dumps(self.schema.model_dump(mode="json"), indent=2, sort_keys=True)

    def to_strips(self) -> StripsTask:
        return compile_instance(self)


def _reject_duplicates(pairs: list[tuple[str, object]]) -> dict:
    seen: dict[str, object] = {}
    for key, value in pairs:
        if key in seen:
            raise SchemaViolationError(f"Duplicate key '{key}'", pointer=f"/{key}")
        seen[key] = value
    return seen


def _pointer(loc: tuple) -> str:
    return "/" + "/".join(str(p) for p in loc)


def _check_references(inst: InstanceSchema) -> None:
    loc_ids = [loc.id for loc in inst.locations]
    obj_ids = [obj.id for obj in inst.objects]
    for label, ids in (("location", loc_ids), ("object", obj_ids)):
        dupes = sorted({i for i in ids if ids.count(i) > 1})
        if dupes:
            raise SchemaViolationError(f"Duplicate {label} ids {dupes}", pointer=f"/{label}s")
    locs, objs = set(loc_ids), set(obj_ids)

    for section in ("init", "goal"):
        placements = getattr(inst, section).placements
        for obj, loc in placements.items():
            if obj not in objs:
                raise DanglingIdError(f"Unknown object '{obj}'", pointer=f"/{section}/placements/{obj}")
            if loc not in locs:
                raise DanglingIdError(f"Unknown location '{loc}'", pointer=f"/{section}/placements/{obj}")

    gripper = inst.init.gripper
    if gripper is not None:
        if gripper not in objs:
            raise DanglingIdError(f"Unknown object '{gripper}'", pointer="/init/gripper")
        if gripper in inst.init.placements:
            raise SchemaViolationError(
                f"Object '{gripper}' is both placed and held", pointer=f"/init/placements/{gripper}"
            )
    for obj in obj_ids:
        if obj not in inst.init.placements and obj != gripper:
            raise SchemaViolationError(f"Object '{obj}' has no initial place", pointer="/init/placements")
    for obj in inst.objects:
        if obj.movable:
            continue
        target = inst.goal.placements.get(obj.id)
        if obj.id == gripper or (target is not None and target != inst.init.placements.get(obj.id)):
            raise SchemaViolationError(f"Immovable object '{obj.id}' cannot be moved", pointer="/goal/placements")


def parse_instance(data: dict) -> ManipInstance:
    try:
        schema = InstanceSchema.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        raise SchemaViolationError(first["msg"], pointer=_pointer(first["loc"])) from e
    _check_references(schema)
    return ManipInstance(schema=schema)


def loads_json(text: str) -> ManipInstance:
    try:
        data = json.loads(text, object_pairs_hook=_reject_duplicates)
    except json.JSONDecodeError as e:
        raise SchemaViolationError(f"Invalid JSON: {e.msg}", pointer="") from e
    return parse_instance(data)


def load_json(path: str | Path) -> ManipInstance:
    inst = loads_json(Path(path).read_text())
    logger.info(
        f"Loaded instance '{inst.name}' from {path}: "
        f"{len(inst.object_ids)} objects, {len(inst.location_ids)} locations"
    )
    return inst


def compile_instance(inst: ManipInstance) -> StripsTask:
    """
    Ground the pick-and-place templates.

    Robot: grasp(o,l) then release(o,l). Robot-only cells cost `far`, shared
    cells `shared` (default `near`), human-reachable cells `near`.
    Human: move(o,from,to) from a human-reachable location to another one,
    or into a shared cell when the instance allows handover. Nothing the
    human does takes an object out of a shared cell.
    """
    s = inst.schema
    costs = s.costs
    movable = inst.movable_ids
    locations = inst.location_ids

    init = {fact("at", o, l) for o, l in s.init.placements.items()}
    init.add(fact("holding", s.init.gripper) if s.init.gripper else fact("handempty"))

    shared_cost = costs.near if costs.shared is None else costs.shared
    by_region = {Region.ROBOT_ONLY: costs.far, Region.SHARED: shared_cost, Region.HUMAN_REACHABLE: costs.near}

    def cost(loc: str) -> int:
        return by_region[inst.region(loc)]

    grasps, releases = [], []
    for o in movable:
        for l in locations:
            grasps.append(
                GroundAction(
                    schema="grasp",
                    args=(o, l),
                    pre=frozenset({fact("at", o, l), fact("handempty")}),
                    add=frozenset({fact("holding", o)}),
                    delete=frozenset({fact("at", o, l), fact("handempty")}),
                    cost=cost(l),
                )
            )
            releases.append(
                GroundAction(
                    schema="release",
                    args=(o, l),
                    pre=frozenset({fact("holding", o)}),
                    add=frozenset({fact("at", o, l), fact("handempty")}),
                    delete=frozenset({fact("holding", o)}),
                    cost=cost(l),
                )
            )

    human_locs = inst.human_locations()
    drop_locs = human_locs + (inst.shared_locations() if s.handover else [])
    moves = [
        GroundAction(
            schema="move",
            args=(o, lf, lt),
            pre=frozenset({fact("at", o, lf)}),
            add=frozenset({fact("at", o, lt)}),
            delete=frozenset({fact("at", o, lf)}),
        )
        for o in movable
        for lf in human_locs
        for lt in drop_locs
        if lf != lt
    ]

    facts = {fact("at", o, l) for o in inst.object_ids for l in locations}
    facts |= {fact("holding", o) for o in movable}
    facts.add(fact("handempty"))

    return StripsTask(
        name=s.name,
        init=frozenset(init),
        goal=frozenset(fact("at", o, l) for o, l in s.goal.placements.items()),
        robot_actions=grasps + releases,
        human_actions=moves,
        objects=tuple(inst.object_ids),
        locations=tuple(locations),
        regions={loc.id: loc.region for loc in s.locations},
        movable=tuple(movable),
        facts=frozenset(facts),
    )
