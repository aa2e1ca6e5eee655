"""Weighted hypergraphs and their algebra: incidence, degrees, adjacency,
boundary/cut volumes, coverage accounting, and construction from extracted
subgraph collections.

Hypergraphs are immutable; ensure_coverage returns a new value. Degree and
volume arithmetic follows the weight type, so Fraction weights stay exact while
float weights stay cheap.
"""

from __future__ import annotations

import math
import warnings
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable

import numpy as np

from .graph import Graph, Selection
from .scoring import SubgraphCollection
from .validation import check_bounds, check_selection, check_weights


class Hypergraph:
    """Vertex set 0..N-1 plus an ordered family of weighted hyperedges.

    :param vertex_count: number of vertices N (isolated vertices allowed)
    :param hyperedges: iterable of vertex collections, each non-empty
    :param weights: positive number per hyperedge, default 1.0
    :param synthetic: per-hyperedge flag marking coverage patches
    :param bounds: optional (alpha, beta) stamped at construction; every
        hyperedge must fit within beta, and non-synthetic ones must reach alpha
    """

    __slots__ = ("_n", "_edges", "_member_sets", "_weights", "_synthetic", "_bounds")

    def __init__(
        self,
        vertex_count: int,
        hyperedges: Iterable[Iterable[int]],
        weights=None,
        *,
        synthetic: Iterable[bool] | None = None,
        bounds: tuple[int, int] | None = None,
    ) -> None:
        if isinstance(vertex_count, bool) or not isinstance(vertex_count, int):
            raise TypeError(f"vertex_count must be an integer, got {vertex_count!r}")
        if vertex_count < 0:
            raise ValueError(f"vertex_count must be >= 0, got {vertex_count}")
        self._n = vertex_count
        edges = []
        seen: set[frozenset[int]] = set()
        for raw in hyperedges:
            sel = check_selection(raw, vertex_count)
            if not sel:
                raise ValueError("hyperedges must be non-empty")
            key = frozenset(sel)
            if key in seen:
                raise ValueError(f"duplicate hyperedge {sel}")
            seen.add(key)
            edges.append(sel)
        self._edges = tuple(edges)
        self._member_sets = tuple(frozenset(e) for e in edges)
        m = len(edges)
        if weights is None:
            weights = (1.0,) * m
        self._weights = check_weights(weights, m)
        if synthetic is None:
            synthetic = (False,) * m
        synthetic = tuple(bool(s) for s in synthetic)
        if len(synthetic) != m:
            raise ValueError(f"expected {m} synthetic flags, got {len(synthetic)}")
        self._synthetic = synthetic
        if bounds is not None:
            alpha, beta = check_bounds(*bounds)
            for sel, synth in zip(edges, synthetic):
                if len(sel) > beta:
                    raise ValueError(f"hyperedge {sel} exceeds beta={beta}")
                if not synth and len(sel) < alpha:
                    raise ValueError(f"hyperedge {sel} is below alpha={alpha}")
            bounds = (alpha, beta)
        self._bounds = bounds

    @property
    def vertex_count(self) -> int:
        return self._n

    @property
    def hyperedge_count(self) -> int:
        return len(self._edges)

    @property
    def hyperedges(self) -> tuple[Selection, ...]:
        return self._edges

    @property
    def weights(self) -> tuple:
        return self._weights

    @property
    def synthetic(self) -> tuple[bool, ...]:
        return self._synthetic

    @property
    def bounds(self) -> tuple[int, int] | None:
        return self._bounds

    def incidence(self) -> np.ndarray:
        """Dense 0/1 incidence matrix, one row per vertex, one column per hyperedge."""
        h = np.zeros((self._n, len(self._edges)), dtype=float)
        for j, edge in enumerate(self._edges):
            h[list(edge), j] = 1.0
        return h

    def vertex_degree(self, v: int):
        """Weighted count of hyperedges containing ``v``."""
        if isinstance(v, bool) or not isinstance(v, int) or not 0 <= v < self._n:
            raise ValueError(f"vertex id {v!r} out of range for {self._n} vertices")
        return sum(w for members, w in zip(self._member_sets, self._weights) if v in members)

    def vertex_degrees(self) -> list:
        degrees = [0] * self._n
        for members, w in zip(self._member_sets, self._weights):
            for v in members:
                degrees[v] += w
        return degrees

    def hyperedge_degree(self, e: int) -> int:
        """Cardinality of hyperedge ``e``."""
        if isinstance(e, bool) or not isinstance(e, int) or not 0 <= e < len(self._edges):
            raise ValueError(f"hyperedge index {e!r} out of range for {len(self._edges)} hyperedges")
        return len(self._edges[e])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Hypergraph):
            return NotImplemented
        return (
            self._n == other._n
            and self._edges == other._edges
            and self._weights == other._weights
            and self._synthetic == other._synthetic
            and self._bounds == other._bounds
        )

    def __hash__(self) -> int:
        return hash((self._n, self._edges, self._weights))

    def __repr__(self) -> str:
        return (
            f"Hypergraph(vertex_count={self._n}, hyperedges={len(self._edges)}, "
            f"bounds={self._bounds})"
        )


def from_subgraphs(
    g: Graph,
    w: SubgraphCollection,
    weights=None,
    *,
    bounds: tuple[int, int] | None = None,
) -> Hypergraph:
    """One hyperedge per collection entry, over the host graph's full vertex set.

    Membership carries over exactly (vertex in entry i iff vertex in hyperedge
    i); vertices outside every entry stay in the hypergraph uncovered, which
    coverage_report surfaces rather than hiding.
    """
    if w.graph.vertex_count != g.vertex_count:
        raise ValueError("collection host does not match the graph")
    if weights is not None and len(tuple(weights)) != len(w.entries):
        raise ValueError(
            f"expected {len(w.entries)} weights, got {len(tuple(weights))}"
        )
    return Hypergraph(g.vertex_count, w.entries, weights, bounds=bounds)


def adjacency(h: Hypergraph) -> np.ndarray:
    """Weighted co-membership matrix: entry (u, v) sums w(e) over hyperedges
    containing both, with an exactly zero diagonal.

    Built pairwise, so it is symmetric by construction and exact whenever the
    weights are exact.
    """
    exact = any(isinstance(w, Fraction) for w in h.weights)
    a = np.zeros((h.vertex_count, h.vertex_count), dtype=object if exact else float)
    for edge, w in zip(h.hyperedges, h.weights):
        for u, v in combinations(edge, 2):
            a[u, v] += w
            a[v, u] += w
    return a


@dataclass(frozen=True)
class CutReport:
    """Boundary structure of one vertex bipartition (S, S^c)."""

    boundary: tuple[int, ...]
    vol_s: object
    vol_sc: object
    vol_boundary: object
    objective: object


def cut(h: Hypergraph, members: Iterable[int], *, mode: str = "normalized") -> CutReport:
    """Boundary hyperedges and volumes for a proper non-empty subset S.

    vol(boundary) spreads each cut hyperedge's weight over its clique of
    sub-edges: w(e) * |e∩S| * |e∩S^c| / |e|. The default objective multiplies
    the boundary volume by (1/vol(S) + 1/vol(S^c)), the standard normalized-cut
    shape; mode="literal" divides by that factor instead.
    """
    if mode not in ("normalized", "literal"):
        raise ValueError(f"unknown cut mode {mode!r}")
    s = check_selection(members, h.vertex_count)
    if not s or len(s) == h.vertex_count:
        raise ValueError("cut needs a non-empty proper subset of the vertices")
    inside = frozenset(s)
    degrees = h.vertex_degrees()
    vol_s = sum(degrees[v] for v in s)
    vol_sc = sum(d for v, d in enumerate(degrees) if v not in inside)
    boundary = []
    vol_boundary = 0
    for j, (edge_members, w) in enumerate(zip(h._member_sets, h.weights)):
        cut_size = len(edge_members & inside)
        if 0 < cut_size < len(edge_members):
            boundary.append(j)
            # Fraction weights keep this exact; float weights stay float.
            vol_boundary += w * cut_size * (len(edge_members) - cut_size) / len(edge_members)
    if vol_boundary == 0:
        # Nothing is cut; both objective forms degenerate to zero and the
        # volumes may legitimately be zero, so no division happens.
        objective = vol_boundary
    else:
        if isinstance(vol_boundary, Fraction):
            factor = 1 / Fraction(vol_s) + 1 / Fraction(vol_sc)
        else:
            factor = 1.0 / vol_s + 1.0 / vol_sc
        objective = vol_boundary * factor if mode == "normalized" else vol_boundary / factor
    return CutReport(
        boundary=tuple(boundary),
        vol_s=vol_s,
        vol_sc=vol_sc,
        vol_boundary=vol_boundary,
        objective=objective,
    )


def coverage_report(h: Hypergraph) -> tuple[int, tuple[int, ...]]:
    """(number of covered vertices, ids of vertices in no hyperedge)."""
    covered: set[int] = set()
    for members in h._member_sets:
        covered |= members
    uncovered = tuple(v for v in range(h.vertex_count) if v not in covered)
    return h.vertex_count - len(uncovered), uncovered


def ensure_coverage(
    h: Hypergraph,
    g: Graph,
    alpha: int | None = None,
    beta: int | None = None,
) -> Hypergraph:
    """Patch uncovered vertices with neighborhood hyperedges; opt-in only.

    Each still-uncovered vertex v gets the hyperedge {v} plus its highest-degree
    neighbors (ties toward lower ids) up to beta members, padded with nearest
    BFS vertices to reach alpha. A component smaller than alpha yields an
    undersized hyperedge with a warning; all additions carry the synthetic
    flag. Idempotent, and existing hyperedges are never touched.
    """
    if g.vertex_count != h.vertex_count:
        raise ValueError("graph does not match the hypergraph's vertex set")
    if alpha is None or beta is None:
        if h.bounds is None:
            raise ValueError("pass alpha and beta, or build the hypergraph with bounds")
        alpha, beta = h.bounds
    alpha, beta = check_bounds(alpha, beta)

    covered: set[int] = set()
    for members in h._member_sets:
        covered |= members
    added: list[Selection] = []
    for v in range(h.vertex_count):
        if v in covered:
            continue
        members = {v}
        ranked = sorted(g.neighbors(v), key=lambda u: (-g.degree(u), u))
        members.update(ranked[: beta - 1])
        if len(members) < alpha:
            members |= _nearest_fill(g, v, members, alpha)
        if len(members) < alpha:
            warnings.warn(
                f"vertex {v}: connected component smaller than alpha={alpha}; "
                "emitting an undersized synthetic hyperedge"
            )
        added.append(tuple(sorted(members)))
        covered |= members
    if not added:
        return h
    unit = Fraction(1) if any(isinstance(w, Fraction) for w in h.weights) else 1.0
    return Hypergraph(
        h.vertex_count,
        h.hyperedges + tuple(added),
        h.weights + (unit,) * len(added),
        synthetic=h.synthetic + (True,) * len(added),
        bounds=h.bounds,
    )


def _nearest_fill(g: Graph, source: int, members: set[int], alpha: int) -> set[int]:
    """BFS from ``source``; closest vertices first, lower ids first within a level."""
    fill: set[int] = set()
    seen = {source}
    frontier = [source]
    while frontier and len(members) + len(fill) < alpha:
        nxt: set[int] = set()
        for v in frontier:
            nxt |= g.neighbors(v) - seen
        seen |= nxt
        for u in sorted(nxt):
            if u not in members:
                fill.add(u)
                if len(members) + len(fill) >= alpha:
                    break
        frontier = sorted(nxt)
    return fill
