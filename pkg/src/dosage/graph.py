"""Simple undirected graphs and the induced-subgraph metrics the extraction needs.

Vertices are dense integers 0..N-1; arbitrary external labels are mapped at the
I/O boundary. A Graph is immutable after construction, so every operation here
is a pure read and safe to call concurrently. Densities are exact fractions so
that argmax comparisons never depend on float rounding.
"""

from __future__ import annotations

import math
from collections import deque
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Iterator

from .validation import check_selection

# A canonical vertex selection: ascending, duplicate-free vertex ids.
Selection = tuple[int, ...]


class Graph:
    """Undirected simple graph on vertices 0..vertex_count-1.

    Edges are unordered pairs of distinct vertices; self-loops and duplicate
    edges are rejected at construction.
    """

    __slots__ = ("_n", "_adj", "_masks", "_edges")

    def __init__(self, vertex_count: int, edges: Iterable[tuple[int, int]] = ()) -> None:
        if isinstance(vertex_count, bool) or not isinstance(vertex_count, int):
            raise TypeError(f"vertex_count must be an integer, got {vertex_count!r}")
        if vertex_count < 0:
            raise ValueError(f"vertex_count must be >= 0, got {vertex_count}")
        self._n = vertex_count
        adjacency: list[set[int]] = [set() for _ in range(vertex_count)]
        canonical: set[tuple[int, int]] = set()
        for pair in edges:
            u, v = pair
            for endpoint in (u, v):
                if isinstance(endpoint, bool) or not isinstance(endpoint, int):
                    raise TypeError(f"vertex ids must be integers, got {endpoint!r}")
                if not 0 <= endpoint < vertex_count:
                    raise ValueError(
                        f"edge ({u}, {v}) references vertex {endpoint}, out of range"
                    )
            if u == v:
                raise ValueError(f"self-loop on vertex {u} is not allowed")
            key = (u, v) if u < v else (v, u)
            if key in canonical:
                raise ValueError(f"duplicate edge ({key[0]}, {key[1]})")
            canonical.add(key)
            adjacency[u].add(v)
            adjacency[v].add(u)
        self._adj = tuple(frozenset(a) for a in adjacency)
        self._edges = frozenset(canonical)
        self._masks = tuple(sum(1 << u for u in a) for a in self._adj)

    @property
    def vertex_count(self) -> int:
        return self._n

    @property
    def vertices(self) -> range:
        return range(self._n)

    @property
    def edges(self) -> frozenset[tuple[int, int]]:
        """Edge set as (u, v) pairs with u < v."""
        return self._edges

    @property
    def edge_count(self) -> int:
        return len(self._edges)

    def neighbors(self, v: int) -> frozenset[int]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def neighbor_mask(self, v: int) -> int:
        """Adjacency of ``v`` as a bitmask (bit u set iff {u, v} is an edge)."""
        return self._masks[v]

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj[u] if 0 <= u < self._n else False

    def is_connected(self) -> bool:
        if self._n <= 1:
            return True
        seen = 1
        frontier = 1
        masks = self._masks
        while frontier:
            nxt = 0
            f = frontier
            while f:
                v = (f & -f).bit_length() - 1
                f &= f - 1
                nxt |= masks[v]
            frontier = nxt & ~seen
            seen |= frontier
        return seen == (1 << self._n) - 1

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._n == other._n and self._edges == other._edges

    def __hash__(self) -> int:
        return hash((self._n, self._edges))

    def __repr__(self) -> str:
        return f"Graph(vertex_count={self._n}, edges={sorted(self._edges)})"


def _members_mask(members: Iterable[int]) -> int:
    mask = 0
    for v in members:
        mask |= 1 << v
    return mask


def _subset_diameter(g: Graph, members: Selection) -> int | float:
    """Diameter of the induced subgraph; math.inf when it is disconnected.

    No validation: callers pass canonical in-range selections.
    """
    if len(members) == 1:
        return 0
    masks = g._masks
    member_mask = _members_mask(members)
    best = 0
    for v in members:
        seen = 1 << v
        frontier = seen
        dist = 0
        while True:
            nxt = 0
            f = frontier
            while f:
                u = (f & -f).bit_length() - 1
                f &= f - 1
                nxt |= masks[u]
            nxt &= member_mask & ~seen
            if not nxt:
                break
            dist += 1
            seen |= nxt
            frontier = nxt
        if seen != member_mask:
            return math.inf
        if dist > best:
            best = dist
    return best


def _subset_edge_count(g: Graph, members: Iterable[int], member_mask: int) -> int:
    masks = g._masks
    return sum((masks[v] & member_mask).bit_count() for v in members) // 2


def induced_edge_count(g: Graph, members: Iterable[int]) -> int:
    """Number of host edges with both endpoints in the selection."""
    sel = check_selection(members, g.vertex_count)
    return _subset_edge_count(g, sel, _members_mask(sel))


def density(g: Graph, members: Iterable[int]) -> Fraction | None:
    """Edges of the induced subgraph divided by its vertex count.

    The empty selection has no defined density and yields None rather than an
    error, mirroring how extraction treats it as "no candidate".
    """
    sel = check_selection(members, g.vertex_count)
    if not sel:
        return None
    return Fraction(_subset_edge_count(g, sel, _members_mask(sel)), len(sel))


def diameter(g: Graph, members: Iterable[int]) -> int | float:
    """Longest shortest-path length inside the induced subgraph.

    0 for a single vertex, math.inf when the induced subgraph is disconnected
    (so any finite bound check fails, the conservative reading).
    """
    sel = check_selection(members, g.vertex_count)
    if not sel:
        raise ValueError("diameter of an empty selection is undefined")
    return _subset_diameter(g, sel)


def average_shortest_path_length(g: Graph) -> Fraction:
    """Mean shortest-path length over all unordered vertex pairs, exact.

    Requires a connected graph on at least two vertices; callers wanting the
    disconnected fallback route to the log2 branch instead.
    """
    n = g.vertex_count
    if n < 2:
        raise ValueError("average shortest path length needs at least two vertices")
    total = 0
    for source in range(n):
        dist = {source: 0}
        queue = deque([source])
        while queue:
            v = queue.popleft()
            for u in g.neighbors(v):
                if u not in dist:
                    dist[u] = dist[v] + 1
                    queue.append(u)
        if len(dist) != n:
            raise ValueError("graph is disconnected; average path length is undefined")
        total += sum(dist.values())
    # Each unordered pair was counted twice.
    return Fraction(total, n * (n - 1))


def min_degree_vertices(g: Graph, members: Iterable[int]) -> Selection:
    """All vertices attaining the minimum degree within the induced subgraph."""
    sel = check_selection(members, g.vertex_count)
    if not sel:
        raise ValueError("minimum degree of an empty selection is undefined")
    member_mask = _members_mask(sel)
    masks = g._masks
    degrees = {v: (masks[v] & member_mask).bit_count() for v in sel}
    lowest = min(degrees.values())
    return tuple(v for v in sel if degrees[v] == lowest)
