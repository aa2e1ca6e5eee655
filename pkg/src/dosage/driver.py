"""Top-level extraction loop: diameter-bound selection, greedy seeding, candidate
enumeration, and the polynomial-time solution verifier."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .errors import CapExceeded
from .graph import (
    Graph,
    Selection,
    _members_mask,
    _subset_diameter,
    _subset_edge_count,
    average_shortest_path_length,
    density,
)
from .peeling import DEFAULT_ENUMERATION_CAP, densest_subgraph_peel
from .scoring import SubgraphCollection, distance
from .validation import as_fraction, check_bounds, check_delta, check_positive_int


@dataclass(frozen=True)
class DosageConfig:
    """Knobs for one extraction run.

    ``lam`` is normalized to an exact Fraction (floats read at their decimal
    face value, so 0.1 means exactly 1/10). ``delta_override`` bypasses the
    automatic diameter-bound selection. ``enumeration_cap``/``force`` guard the
    exponential candidate enumeration.
    """

    k: int
    alpha: int
    beta: int
    lam: Fraction = Fraction(1)
    delta_override: object = None
    enumeration_cap: int = DEFAULT_ENUMERATION_CAP
    force: bool = False

    def __post_init__(self) -> None:
        check_positive_int("k", self.k)
        check_bounds(self.alpha, self.beta)
        object.__setattr__(self, "lam", as_fraction("lambda", self.lam, minimum=0, strict=True))
        if self.delta_override is not None:
            check_delta(self.delta_override)
        check_positive_int("enumeration_cap", self.enumeration_cap)


def select_delta(g: Graph, override=None):
    """Diameter bound: twice the mean shortest-path length when connected,
    log2 of the vertex count otherwise; an explicit override wins."""
    if override is not None:
        return check_delta(override)
    if g.vertex_count < 2:
        raise ValueError("delta selection needs at least two vertices")
    if g.is_connected():
        return 2 * average_shortest_path_length(g)
    return math.log2(g.vertex_count)


def densest_distinct_subgraph(
    g: Graph, w: SubgraphCollection, cfg: DosageConfig, delta
) -> Selection | None:
    """Best new entry: argmax of the extended objective over all subsets of
    size alpha..beta that meet the diameter bound and differ from every stored
    vertex set. Ties resolve toward smaller, lexicographically earlier subsets.
    None when no candidate survives the guards.
    """
    delta = check_delta(delta)
    n = g.vertex_count
    if n == 0:
        return None
    if n > cfg.enumeration_cap and not cfg.force:
        raise CapExceeded(
            f"graph has {n} vertices, above the enumeration cap ({cfg.enumeration_cap}); "
            "pass force=True (--force on the CLI) to enumerate anyway"
        )
    taken = [frozenset(entry) for entry in w.entries]
    taken_lookup = set(taken)
    lam = cfg.lam
    skip_diameter = delta == math.inf
    best: Selection | None = None
    best_score: Fraction | None = None
    for size in range(cfg.alpha, min(cfg.beta, n) + 1):
        for combo in combinations(range(n), size):
            members = frozenset(combo)
            if members in taken_lookup:
                continue
            if not skip_diameter and _subset_diameter(g, combo) > delta:
                continue
            # The stored entries contribute the same constant to every extended
            # objective, so ranking by the candidate's own terms is equivalent.
            score = Fraction(_subset_edge_count(g, combo, _members_mask(combo)), size)
            for entry in taken:
                inter = len(members & entry)
                score += lam * (2 - Fraction(inter * inter, size * len(entry)))
            if best_score is None or score > best_score:
                best = combo
                best_score = score
    return best


def dosage(g: Graph, cfg: DosageConfig) -> SubgraphCollection:
    """The full greedy loop: seed with the peel result, then append the best
    distinct candidate until k entries are collected or candidates run out.

    Running short of candidates is a warning, never an error; the returned
    collection simply has fewer than k entries.
    """
    n = g.vertex_count
    if n == 0:
        raise ValueError("graph is empty")
    if cfg.k >= n:
        raise ValueError(f"k={cfg.k} must be smaller than the vertex count ({n})")
    delta = select_delta(g, cfg.delta_override)

    entries: list[Selection] = []
    seed = densest_subgraph_peel(g, cfg.alpha, cfg.beta, delta)
    if seed is not None:
        entries.append(seed)
    while len(entries) < cfg.k:
        current = SubgraphCollection(g, tuple(entries))
        nxt = densest_distinct_subgraph(g, current, cfg, delta)
        if nxt is None:
            warnings.warn(
                f"only {len(entries)} of the requested {cfg.k} subgraphs exist "
                "under the current guards"
            )
            break
        entries.append(nxt)
    return SubgraphCollection(g, tuple(entries))


@dataclass(frozen=True)
class VerifierReport:
    """Outcome of the polynomial-time solution check; failures are fields, not errors."""

    size_ok: bool
    density_ok: bool
    overlap_ok: bool
    per_entry_densities: tuple[Fraction, ...]

    @property
    def verdict(self) -> bool:
        return self.size_ok and self.density_ok and self.overlap_ok


def verify_solution(g: Graph, w: SubgraphCollection, cfg: DosageConfig, r_min) -> VerifierReport:
    """Check a candidate solution: sizes within bounds, every density at least
    r_min, and pairwise-distinct vertex sets. Polynomial in N, edges, and k."""
    r_min = as_fraction("r_min", r_min, minimum=0)
    size_ok = all(cfg.alpha <= len(entry) <= cfg.beta for entry in w.entries)
    dens = tuple(density(g, entry) for entry in w.entries)
    density_ok = all(d >= r_min for d in dens)
    overlap_ok = all(
        distance(a, b) > 0 for a, b in combinations(w.entries, 2)
    )
    return VerifierReport(
        size_ok=size_ok,
        density_ok=density_ok,
        overlap_ok=overlap_ok,
        per_entry_densities=dens,
    )
