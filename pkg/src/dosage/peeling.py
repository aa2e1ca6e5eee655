"""Constrained densest-subgraph search: greedy peeling and an exhaustive oracle.

Both operations look for a vertex set whose induced subgraph maximizes
edges/vertices subject to three guards: alpha <= size <= beta and induced
diameter <= delta. The peel is the fast production path; the exhaustive search
is the ground truth it is tested against.
"""

from __future__ import annotations

import math
import warnings
from fractions import Fraction
from itertools import combinations

from .errors import CapExceeded
from .graph import Graph, Selection, _members_mask, _subset_diameter, _subset_edge_count
from .validation import check_bounds, check_delta

DEFAULT_ENUMERATION_CAP = 20


def densest_subgraph_peel(g: Graph, alpha: int, beta: int, delta) -> Selection | None:
    """Greedy peeling under size and diameter guards.

    Starting from the full vertex set, each round records the surviving set as
    the new best when it beats the best density so far while satisfying the
    size and diameter guards, then deletes every vertex of minimum induced
    degree at once. Stops when fewer than ``alpha`` vertices survive. Returns
    the best recorded selection, or None when no round ever qualified.
    """
    alpha, beta = check_bounds(alpha, beta)
    delta = check_delta(delta)
    n = g.vertex_count
    if n == 0:
        return None
    if alpha > n:
        warnings.warn(f"alpha={alpha} exceeds the vertex count {n}; nothing to extract")
        return None

    current: set[int] = set(range(n))
    degrees = {v: g.degree(v) for v in current}
    skip_diameter = delta == math.inf
    best: Selection | None = None
    best_density = Fraction(0)
    while current:
        size = len(current)
        if alpha <= size <= beta:
            # Guards are a pure conjunction; the cheap ones run first.
            d = Fraction(sum(degrees.values()) // 2, size)
            if d > best_density:
                sel = tuple(sorted(current))
                if skip_diameter or _subset_diameter(g, sel) <= delta:
                    best = sel
                    best_density = d
        lowest = min(degrees.values())
        batch = [v for v in current if degrees[v] == lowest]
        for v in batch:
            current.remove(v)
            del degrees[v]
        for v in batch:
            for u in g.neighbors(v):
                if u in degrees:
                    degrees[u] -= 1
        if len(current) < alpha:
            break
    return best


def densest_subgraph_exact(
    g: Graph,
    alpha: int,
    beta: int,
    delta,
    *,
    cap: int = DEFAULT_ENUMERATION_CAP,
    force: bool = False,
) -> Selection | None:
    """Exhaustive search over every guard-satisfying subset; the reference answer.

    Ties in density resolve toward the smaller, then lexicographically
    earliest selection. Exponential in the vertex count, hence the cap.
    """
    alpha, beta = check_bounds(alpha, beta)
    delta = check_delta(delta)
    n = g.vertex_count
    if n > cap and not force:
        raise CapExceeded(
            f"graph has {n} vertices, above the enumeration cap ({cap}); "
            "pass force=True (--force on the CLI) to enumerate anyway"
        )
    skip_diameter = delta == math.inf
    best: Selection | None = None
    best_density = Fraction(0)
    for size in range(alpha, min(beta, n) + 1):
        for combo in combinations(range(n), size):
            mask = _members_mask(combo)
            d = Fraction(_subset_edge_count(g, combo, mask), size)
            # Strict improvement keeps the first (smallest, lex-earliest) optimum.
            if best is not None and d <= best_density:
                continue
            if not skip_diameter and _subset_diameter(g, combo) > delta:
                continue
            best = combo
            best_density = d
    return best
