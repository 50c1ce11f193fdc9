from src.symgame.encoding import SymbolicGame, encode
from src.symgame.images import (
    action_values,
    backup,
    controllable_pre,
    dfa_step,
    image,
    pre_image,
    product_pre,
    reachable,
)
from src.symgame.relations import (
    TransitionRelation,
    TransitionVector,
    build_monolithic,
    build_partitioned,
    recompose,
    relational,
    utility_vector,
)

__all__ = [
    "SymbolicGame",
    "TransitionRelation",
    "TransitionVector",
    "action_values",
    "backup",
    "build_monolithic",
    "build_partitioned",
    "controllable_pre",
    "dfa_step",
    "encode",
    "image",
    "pre_image",
    "product_pre",
    "reachable",
    "recompose",
    "relational",
    "utility_vector",
]
