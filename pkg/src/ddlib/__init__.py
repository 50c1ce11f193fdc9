from src.ddlib.blocks import assign_code, bits_code, code_bits, read_code, width_for
from src.ddlib.manager import Manager, NodeRef
from src.ddlib.terminals import INFINITY, is_finite

__all__ = [
    "INFINITY",
    "Manager",
    "NodeRef",
    "assign_code",
    "bits_code",
    "code_bits",
    "is_finite",
    "read_code",
    "width_for",
]
