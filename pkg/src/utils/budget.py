import math
from fractions import Fraction

from src.config.settings import get_settings
from src.ddlib.terminals import Value, is_finite
from src.exceptions import InfeasibleError

DEFAULT_BUDGET_FACTOR = Fraction(5, 4)


def budget_factor() -> Fraction:
    # settings carry a float; read it back as the decimal the user wrote
    return Fraction(str(get_settings().budget_factor)).limit_denominator(1000)


def auto_budget(minmax_value: Value, factor: Fraction | float | None = None) -> int:
    """B = ceil(factor * min-max value)."""
    if not is_finite(minmax_value):
        raise InfeasibleError("No winning strategy exists, so no budget can be derived.")
    if factor is None:
        factor = budget_factor()
    return math.ceil(Fraction(str(factor)) * minmax_value)


def resolve_budget(
    requested: int | None, minmax_value: Value, factor: Fraction | float | None = None
) -> tuple[int, bool]:
    """(budget, was_auto). An explicit budget always wins."""
    if requested is not None:
        if requested < 0:
            raise ValueError(f"Budget must be non-negative, got {requested}")
        return requested, False
    return auto_budget(minmax_value, factor), True
