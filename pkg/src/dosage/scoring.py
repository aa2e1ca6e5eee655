"""Overlap scoring: subgraph distance, distinctness, and the density+diversity objective.

All arithmetic is exact rational so that objective comparisons (and therefore
greedy tie-breaks) are bit-reproducible.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from typing import Iterable, Iterator

from .graph import Graph, Selection, density
from .validation import as_fraction, check_selection


def distance(u: Iterable[int], z: Iterable[int]) -> Fraction:
    """Overlap distance between two vertex sets, in [0, 2].

    Empty operands score the maximal 2 (checked before the equality branch),
    identical sets score 0, and otherwise the overlap term |U∩Z|^2 / (|U||Z|)
    is subtracted from 2, so heavy overlap drags the distance toward 0.
    """
    us, zs = frozenset(u), frozenset(z)
    if not us or not zs:
        return Fraction(2)
    if us == zs:
        return Fraction(0)
    inter = len(us & zs)
    return 2 - Fraction(inter * inter, len(us) * len(zs))


def is_distinct(s: Iterable[int], collection) -> bool:
    """True when the selection's vertex set equals no stored vertex set.

    Exact set equality, not a float threshold: "distance > 0" means nothing
    more than "different vertex sets". Vacuously true for an empty collection.
    """
    target = frozenset(s)
    return all(frozenset(entry) != target for entry in collection)


@dataclass(frozen=True)
class SubgraphCollection:
    """An ordered solution: vertex selections over one host graph.

    Entries are canonicalized and must be non-empty and in range. Pairwise
    distinctness is the extraction driver's responsibility, not enforced here,
    so deliberately broken solutions can still be built for the verifier.
    """

    graph: Graph
    entries: tuple[Selection, ...] = ()

    def __post_init__(self) -> None:
        canonical = []
        for entry in self.entries:
            sel = check_selection(entry, self.graph.vertex_count)
            if not sel:
                raise ValueError("collection entries must be non-empty")
            canonical.append(sel)
        object.__setattr__(self, "entries", tuple(canonical))

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self) -> Iterator[Selection]:
        return iter(self.entries)

    def __getitem__(self, index: int) -> Selection:
        return self.entries[index]

    def extended(self, entry: Iterable[int]) -> "SubgraphCollection":
        return SubgraphCollection(self.graph, self.entries + (tuple(entry),))

    def densities(self) -> tuple[Fraction, ...]:
        return tuple(density(self.graph, entry) for entry in self.entries)

    def pairwise_distance_sum(self) -> Fraction:
        return sum(
            (distance(a, b) for a, b in combinations(self.entries, 2)),
            Fraction(0),
        )


def objective(w: SubgraphCollection, lam) -> Fraction:
    """Total density plus lam times the pairwise distance sum.

    Linear in lam with slope equal to the distance sum; invariant under entry
    reordering. lam > 0 trades density against diversity.
    """
    lam = as_fraction("lambda", lam, minimum=0, strict=True)
    return sum(w.densities(), Fraction(0)) + lam * w.pairwise_distance_sum()
