from fractions import Fraction
from typing import Union


class _Infinity:
    """Distinguished +infinity terminal. Absorbs under PLUS, wins under MAX."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INFINITY"

    def __str__(self) -> str:
        return "inf"

    def __reduce__(self):
        return (_Infinity, ())

    def __hash__(self) -> int:
        return hash("INFINITY")

    def __eq__(self, other) -> bool:
        return other is self

    def __ne__(self, other) -> bool:
        return other is not self

    def __lt__(self, other) -> bool:
        return False

    def __le__(self, other) -> bool:
        return other is self

    def __gt__(self, other) -> bool:
        return other is not self

    def __ge__(self, other) -> bool:
        return True

    def __add__(self, other):
        return self

    __radd__ = __add__

    def __sub__(self, other):
        if other is self:
            raise ArithmeticError("INFINITY - INFINITY is undefined")
        return self

    def __rsub__(self, other):
        raise ArithmeticError("finite - INFINITY is undefined")


INFINITY = _Infinity()

Value = Union[int, Fraction, _Infinity]


def normalize(value) -> Value:
    """Coerce a terminal value into the exact representation used as a table key."""
    if value is INFINITY:
        return INFINITY
    if isinstance(value, bool):
        return int(value)
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return int(value) if value.denominator == 1 else value
    raise TypeError(f"Terminal values must be int, Fraction or INFINITY, got {value!r}")


def is_finite(value) -> bool:
    return value is not INFINITY


def to_json(value):
    """JSON-friendly rendering: ints stay ints, INFINITY becomes the string 'inf'."""
    if value is INFINITY:
        return "inf"
    if isinstance(value, Fraction):
        return str(value)
    return value


def from_json(raw) -> Value:
    if raw == "inf":
        return INFINITY
    if isinstance(raw, str):
        return normalize(Fraction(raw))
    return normalize(raw)
