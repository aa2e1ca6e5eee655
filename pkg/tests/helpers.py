"""Independent oracles for the test suite.

Everything here recomputes results from first principles -- networkx metrics,
itertools enumeration, direct formulas -- and deliberately shares no code with
the package's fast paths.
"""

from __future__ import annotations

import math
import random
from fractions import Fraction
from itertools import combinations

import networkx as nx

from dosage.graph import Graph
from dosage.hypergraph import Hypergraph


def to_networkx(g: Graph) -> nx.Graph:
    nxg = nx.Graph()
    nxg.add_nodes_from(range(g.vertex_count))
    nxg.add_edges_from(g.edges)
    return nxg


def oracle_edge_count(g: Graph, members) -> int:
    members = set(members)
    return sum(1 for u, v in g.edges if u in members and v in members)


def oracle_density(g: Graph, members) -> Fraction | None:
    members = set(members)
    if not members:
        return None
    return Fraction(oracle_edge_count(g, members), len(members))


def oracle_diameter(g: Graph, members):
    sub = to_networkx(g).subgraph(set(members))
    if sub.number_of_nodes() == 1:
        return 0
    if not nx.is_connected(sub):
        return math.inf
    return nx.diameter(sub)


def oracle_aspl(g: Graph) -> Fraction:
    nxg = to_networkx(g)
    total = 0
    pairs = 0
    for u, v in combinations(range(g.vertex_count), 2):
        total += nx.shortest_path_length(nxg, u, v)
        pairs += 1
    return Fraction(total, pairs)


def oracle_distance(u, z) -> Fraction:
    us, zs = set(u), set(z)
    if not us or not zs:
        return Fraction(2)
    if us == zs:
        return Fraction(0)
    return Fraction(2) - Fraction(len(us & zs) ** 2, len(us) * len(zs))


def oracle_objective(g: Graph, entries, lam: Fraction) -> Fraction:
    total = sum((oracle_density(g, e) for e in entries), Fraction(0))
    dist = sum(
        (oracle_distance(a, b) for a, b in combinations(entries, 2)), Fraction(0)
    )
    return total + Fraction(lam) * dist


def guarded_subsets(g: Graph, alpha: int, beta: int, delta):
    """All selections with alpha <= size <= beta and induced diameter <= delta."""
    n = g.vertex_count
    for size in range(alpha, min(beta, n) + 1):
        for combo in combinations(range(n), size):
            if oracle_diameter(g, combo) <= delta:
                yield combo


def oracle_exact_densest(g: Graph, alpha: int, beta: int, delta):
    """Max-density guarded subset; ties toward smaller then lex-earlier."""
    best, best_d = None, None
    for combo in guarded_subsets(g, alpha, beta, delta):
        d = oracle_density(g, combo)
        if best_d is None or d > best_d:
            best, best_d = combo, d
    return best


def oracle_argmax_candidate(g: Graph, entries, lam, alpha, beta, delta):
    """The enumerator's contract, redone independently: best distinct candidate."""
    stored = [set(e) for e in entries]
    best, best_obj = None, None
    for combo in guarded_subsets(g, alpha, beta, delta):
        if any(set(combo) == s for s in stored):
            continue
        obj = oracle_objective(g, list(entries) + [combo], Fraction(lam))
        if best_obj is None or obj > best_obj:
            best, best_obj = combo, obj
    return best


def oracle_peel_replay(g: Graph, alpha: int, beta: int, delta):
    """The peeling loop, replayed on networkx structures."""
    nxg = to_networkx(g)
    current = nxg.copy()
    best, best_d = None, Fraction(0)
    if alpha > g.vertex_count:
        return None
    while current.number_of_nodes() > 0:
        size = current.number_of_nodes()
        if alpha <= size <= beta and oracle_diameter(g, current.nodes) <= delta:
            d = Fraction(current.number_of_edges(), size)
            if d > best_d:
                best, best_d = tuple(sorted(current.nodes)), d
        degrees = dict(current.degree())
        lowest = min(degrees.values())
        current.remove_nodes_from([v for v, deg in degrees.items() if deg == lowest])
        if current.number_of_nodes() < alpha:
            break
    return best


def finite_difference_gradients(p, x, labels, mask, weights, step=1e-5):
    """Central differences of the training loss, the oracle for the backward pass."""
    import numpy as np

    from dosage.hgnn import loss_and_gradients

    grads = []
    for idx, w in enumerate(weights):
        grad = np.zeros_like(w)
        for pos in np.ndindex(w.shape):
            bumped = [arr.copy() for arr in weights]
            bumped[idx][pos] += step
            up, _ = loss_and_gradients(p, x, labels, mask, bumped)
            bumped[idx][pos] -= 2 * step
            down, _ = loss_and_gradients(p, x, labels, mask, bumped)
            grad[pos] = (up - down) / (2 * step)
        grads.append(grad)
    return grads


def make_gradient_instance(seed):
    """A random small covered hypergraph with features, labels, and weights."""
    import numpy as np

    rng = np.random.default_rng(seed)
    n = int(rng.integers(3, 13))
    c = int(rng.integers(1, 5))
    hidden = int(rng.integers(2, 5))
    classes = int(rng.integers(2, 4))
    edges = []
    seen = set()
    for _ in range(int(rng.integers(1, 5))):
        size = int(rng.integers(1, n + 1))
        edge = tuple(sorted(rng.choice(n, size=size, replace=False).tolist()))
        if frozenset(edge) not in seen:
            seen.add(frozenset(edge))
            edges.append(edge)
    covered = {v for e in edges for v in e}
    for v in range(n):
        if v not in covered:
            edges.append((v,))
    h = Hypergraph(n, edges)
    x = rng.normal(size=(n, c))
    labels = rng.integers(0, classes, size=n)
    mask = np.sort(rng.choice(n, size=max(2, n // 2), replace=False))
    weights = [rng.normal(size=(c, hidden)), rng.normal(size=(hidden, classes))]
    return h, x, labels, mask, weights


def random_hypergraph(rng: random.Random, max_n: int = 12, max_m: int = 6,
                      exact_weights: bool = False, covered: bool = False) -> Hypergraph:
    n = rng.randint(1, max_n)
    m = rng.randint(0 if not covered else 1, max_m)
    edges: list[tuple[int, ...]] = []
    seen = set()
    for _ in range(m):
        size = rng.randint(1, n)
        edge = tuple(sorted(rng.sample(range(n), size)))
        if frozenset(edge) in seen:
            continue
        seen.add(frozenset(edge))
        edges.append(edge)
    if covered:
        missing = set(range(n)) - {v for e in edges for v in e}
        for v in sorted(missing):
            edge = (v,)
            if frozenset(edge) not in seen:
                seen.add(frozenset(edge))
                edges.append(edge)
    if exact_weights:
        weights = [Fraction(rng.randint(1, 8), rng.randint(1, 8)) for _ in edges]
    else:
        weights = [rng.uniform(0.1, 3.0) for _ in edges]
    return Hypergraph(n, edges, weights)
