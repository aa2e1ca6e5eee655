"""Deterministic synthetic instances for experiments and tests."""

from __future__ import annotations

import random
from itertools import combinations

from .graph import Graph


def erdos_renyi(n: int, p: float, seed: int) -> Graph:
    """G(n, p) with a stable stream: same (n, p, seed) gives the same graph."""
    rng = random.Random(seed)
    edges = [(u, v) for u, v in combinations(range(n), 2) if rng.random() < p]
    return Graph(n, edges)


def planted_partition(
    sizes: tuple[int, ...] = (10, 10),
    p_intra: float = 0.8,
    bridge_edges: int = 2,
    seed: int = 0,
) -> tuple[Graph, tuple[int, ...]]:
    """Communities with dense internal wiring joined by a few bridge edges.

    Returns the graph and the community id of each vertex. Cross-community
    edges are exactly ``bridge_edges`` pairs sampled without replacement.
    """
    rng = random.Random(seed)
    blocks = []
    start = 0
    for size in sizes:
        blocks.append(range(start, start + size))
        start += size
    n = start
    edges = []
    for block in blocks:
        for u, v in combinations(block, 2):
            if rng.random() < p_intra:
                edges.append((u, v))
    cross = [
        (u, v)
        for i, a in enumerate(blocks)
        for b in blocks[i + 1 :]
        for u in a
        for v in b
    ]
    if bridge_edges > len(cross):
        raise ValueError(f"cannot place {bridge_edges} bridges across {len(cross)} cross pairs")
    edges.extend(rng.sample(cross, bridge_edges))
    labels = tuple(i for i, block in enumerate(blocks) for _ in block)
    return Graph(n, edges), labels


def stratified_masks(
    labels, train_fraction: float, seed: int
) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Seeded stratified split; every class keeps at least one training vertex."""
    if not 0 < train_fraction < 1:
        raise ValueError(f"train_fraction must be in (0, 1), got {train_fraction}")
    rng = random.Random(seed)
    by_class: dict[int, list[int]] = {}
    for v, label in enumerate(labels):
        by_class.setdefault(int(label), []).append(v)
    train: list[int] = []
    for label in sorted(by_class):
        ids = by_class[label]
        take = max(1, round(train_fraction * len(ids)))
        train.extend(rng.sample(ids, take))
    train_set = set(train)
    test = tuple(v for v in range(len(labels)) if v not in train_set)
    return tuple(sorted(train)), test
