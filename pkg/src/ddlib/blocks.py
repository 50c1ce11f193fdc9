"""Helpers for binary codes stored in a block of variables, most significant bit first."""

from typing import Mapping, Sequence


def width_for(count: int) -> int:
    """Bits needed to give `count` distinct codes (at least one)."""
    return max(1, (count - 1).bit_length())


def code_bits(code: int, width: int) -> tuple[bool, ...]:
    if code < 0 or code >= (1 << width):
        raise ValueError(f"Code {code} does not fit in {width} bits")
    return tuple(bool((code >> (width - 1 - k)) & 1) for k in range(width))


def bits_code(bits: Sequence[bool]) -> int:
    code = 0
    for bit in bits:
        code = (code << 1) | int(bool(bit))
    return code


def read_code(assignment: Mapping[int, bool], vars: Sequence[int]) -> int:
    return bits_code([assignment.get(v, False) for v in vars])


def assign_code(vars: Sequence[int], code: int) -> dict[int, bool]:
    return dict(zip(vars, code_bits(code, len(vars))))
