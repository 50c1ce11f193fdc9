import logging
import random

from src.domain.instance import ManipInstance, parse_instance
from src.enums import Region

logger = logging.getLogger(__name__)


def gen_benchmark(
    num_locations: int,
    num_objects: int,
    seed: int = 0,
    cost_near: int = 1,
    cost_far: int = 3,
    human_region_fraction: float = 0.25,
) -> ManipInstance:
    """
    Three-region pick-and-place instance with handover cells.

    Locations come in order: h = round(L * fraction) human-reachable cells
    (at least 1), shared cells (one for L in 3..4, two from L = 5), then
    robot-only cells (at least 1). The human may drop objects from its
    region into a shared cell. Robot actions cost `cost_near` next to the
    human and `cost_far` everywhere else, shared cells included.

    o0 starts next to the human and belongs in the first shared cell, so a
    helpful human can deliver it while the robot works elsewhere; a second
    shared cell gives an unhelpful human somewhere worse to put it. The
    other objects start outside the shared cells and go to robot-only
    targets other than their start. With L = 2 there is no shared cell and
    every goal is robot-only.
    """
    if num_locations < 2:
        raise ValueError("num_locations must be at least 2")
    if num_objects < 1:
        raise ValueError("num_objects must be at least 1")

    rng = random.Random(seed)
    num_shared = 0 if num_locations < 3 else 1 if num_locations < 5 else 2
    h = min(num_locations - num_shared - 1, max(1, round(num_locations * human_region_fraction)))
    regions = [Region.HUMAN_REACHABLE] * h + [Region.SHARED] * num_shared
    regions += [Region.ROBOT_ONLY] * (num_locations - len(regions))
    locations = [{"id": f"l{i}", "region": region.value} for i, region in enumerate(regions)]

    ids = [loc["id"] for loc in locations]
    near, shared, far = ids[:h], ids[h : h + num_shared], ids[h + num_shared :]
    objects = [{"id": f"o{i}", "movable": True} for i in range(num_objects)]

    init, goal = {}, {}
    for i, obj in enumerate(objects):
        if i == 0 and shared:
            start, target = rng.choice(near), shared[0]
        else:
            start = rng.choice(near + far)
            target = rng.choice([l for l in far if l != start] or far)
        init[obj["id"]] = start
        goal[obj["id"]] = target

    data = {
        "name": f"bench-L{num_locations}-O{num_objects}-s{seed}",
        "locations": locations,
        "objects": objects,
        "init": {"placements": init, "gripper": None},
        "goal": {"placements": goal},
        "costs": {"near": cost_near, "far": cost_far, "shared": cost_far},
        "handover": True,
    }
    logger.debug(f"Generated {data['name']}: human {near}, shared {shared}, robot-only {far}")
    return parse_instance(data)
