"""Input validation helpers shared by the functional API and the estimators."""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable


def check_positive_int(name: str, value) -> int:
    if not isinstance(value, int) or isinstance(value, bool):
        raise TypeError(f"{name} must be an integer, got {value!r}")
    if value < 1:
        raise ValueError(f"{name} must be >= 1, got {value}")
    return value


def as_fraction(name: str, value, *, minimum=None, strict=False) -> Fraction:
    """Convert a number to an exact Fraction; floats are read at their decimal face value.

    ``Fraction(str(0.1))`` gives 1/10, not the binary expansion, so CLI-style
    decimal inputs stay exact through all rational arithmetic.
    """
    if isinstance(value, bool):
        raise TypeError(f"{name} must be a number, got {value!r}")
    if isinstance(value, Fraction):
        result = value
    elif isinstance(value, int):
        result = Fraction(value)
    elif isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"{name} must be finite, got {value}")
        result = Fraction(str(value))
    elif isinstance(value, str):
        result = Fraction(value)
    else:
        raise TypeError(f"{name} must be a number, got {value!r}")
    if minimum is not None:
        if strict and not result > minimum:
            raise ValueError(f"{name} must be > {minimum}, got {value}")
        if not strict and not result >= minimum:
            raise ValueError(f"{name} must be >= {minimum}, got {value}")
    return result


def check_bounds(alpha, beta) -> tuple[int, int]:
    """Validate a (min size, max size) pair for subgraph extraction."""
    alpha = check_positive_int("alpha", alpha)
    beta = check_positive_int("beta", beta)
    if alpha > beta:
        raise ValueError(f"alpha exceeds beta (alpha={alpha}, beta={beta})")
    return alpha, beta


def check_delta(delta):
    """Validate a diameter bound: any positive real, infinity allowed."""
    if isinstance(delta, bool) or not isinstance(delta, (int, float, Fraction)):
        raise TypeError(f"delta must be a number, got {delta!r}")
    if math.isnan(delta) if isinstance(delta, float) else False:
        raise ValueError("delta must not be NaN")
    if not delta > 0:
        raise ValueError(f"delta must be > 0, got {delta}")
    return delta


def check_selection(members: Iterable[int], vertex_count: int) -> tuple[int, ...]:
    """Canonicalize a vertex selection: sorted, deduplicated, range checked."""
    seen = set()
    for v in members:
        if isinstance(v, bool) or not isinstance(v, int):
            raise TypeError(f"vertex ids must be integers, got {v!r}")
        if not 0 <= v < vertex_count:
            raise ValueError(f"vertex id {v} out of range for {vertex_count} vertices")
        seen.add(v)
    return tuple(sorted(seen))


def check_weights(weights, count: int) -> tuple:
    """Validate one positive weight per hyperedge."""
    weights = tuple(weights)
    if len(weights) != count:
        raise ValueError(f"expected {count} weights, got {len(weights)}")
    for w in weights:
        if isinstance(w, bool) or not isinstance(w, (int, float, Fraction)):
            raise TypeError(f"weights must be numbers, got {w!r}")
        if not w > 0:
            raise ValueError(f"weights must be positive, got {w}")
    return weights
