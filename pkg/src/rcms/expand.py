"""Expansion of RC matrices into weighted vacuum graphs.

Row ``i`` of an RC matrix lists how many of the four derivative slots of one
interaction block land on each vertex.  Pairing the four slots in each of the
three possible ways gives the block's edge increments; multiplying the
blocks of all rows out adds their increments.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .graphs import VacGraph, canonical_adjacencies
from .matrix_core import InvariantViolation, PartialRcMatrix, RcMatrix


@dataclass(frozen=True)
class EdgeBlock:
    """One weighted term of a row's expansion.

    ``increment`` is a symmetric ``m x m`` matrix with even diagonal whose
    entries sum to the row total.
    """

    weight: int
    increment: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        inc = np.asarray(self.increment)
        if self.weight <= 0:
            raise ValueError("block weight must be positive")
        if (inc != inc.T).any() or (np.diag(inc) % 2).any():
            raise ValueError("increment must be symmetric with an even diagonal")


def perfect_matchings(slots: int) -> Iterator[tuple[tuple[int, int], ...]]:
    """Pairings of ``range(slots)``: the lowest free slot pairs with each later one."""
    if slots % 2:
        raise ValueError("need an even number of slots")

    def rec(free):
        if not free:
            yield ()
            return
        a = free[0]
        for k in range(1, len(free)):
            rest = free[1:k] + free[k + 1:]
            for tail in rec(rest):
                yield ((a, free[k]),) + tail

    yield from rec(tuple(range(slots)))


def pairing_weight(valence: int) -> int:
    """Weight of a single slot pairing: ``2^(N/2) (N/2)!`` (8 for N=4)."""
    return 2 ** (valence // 2) * math.factorial(valence // 2)


@lru_cache(maxsize=None)
def _row_blocks_cached(row: tuple[int, ...]) -> tuple[EdgeBlock, ...]:
    valence = sum(row)
    labels = [v for v, a in enumerate(row) for _ in range(a)]
    m = len(row)
    w = pairing_weight(valence)
    merged: dict[tuple, int] = {}
    for pairing in perfect_matchings(valence):
        inc = [[0] * m for _ in range(m)]
        for s, t in pairing:
            i, j = labels[s], labels[t]
            if i == j:
                inc[i][i] += 2
            else:
                inc[i][j] += 1
                inc[j][i] += 1
        key = tuple(map(tuple, inc))
        merged[key] = merged.get(key, 0) + w
    return tuple(EdgeBlock(wt, inc) for inc, wt in merged.items())


def row_blocks(row: Sequence[int], valence: int = 4) -> list[EdgeBlock]:
    """Weighted edge increments produced by one row.

    Blocks come out in order of first appearance over the pairings
    ``(01|23), (02|13), (03|12)``; identical increments are merged.

    >>> [b.weight for b in row_blocks((2, 2))]
    [8, 16]
    """
    row = tuple(int(x) for x in row)
    if any(x < 0 for x in row) or sum(row) != valence:
        raise ValueError(f"row {row} must be non-negative and sum to {valence}")
    return list(_row_blocks_cached(row))


def mult_factor(A: PartialRcMatrix) -> int:
    """Product over rows of the multinomial ``d! / (a_i1! ... a_im!)``."""
    d_fact = math.factorial(A.d)
    out = 1
    for row in A.rows:
        out *= d_fact // math.prod(math.factorial(x) for x in row)
    return out


class WeightedGraphSet(dict):
    """Mapping from :class:`VacGraph` to a positive integer multiplicity.

    Keys produced by this module are canonical; ``+`` merges by key and
    ``k * s`` scales every multiplicity.
    """

    def __setitem__(self, key, value):
        if not isinstance(key, VacGraph):
            raise TypeError("keys must be VacGraph")
        if value <= 0:
            raise ValueError("multiplicities must be positive")
        super().__setitem__(key, value)

    def add(self, graph: VacGraph, weight: int) -> None:
        self[graph] = self.get(graph, 0) + weight

    def total(self) -> int:
        return sum(self.values())

    def __add__(self, other: Mapping[VacGraph, int]) -> "WeightedGraphSet":
        out = WeightedGraphSet(self)
        for g, w in other.items():
            out.add(g, w)
        return out

    def __mul__(self, k: int) -> "WeightedGraphSet":
        return WeightedGraphSet({g: w * k for g, w in self.items()})

    __rmul__ = __mul__

    def sorted_items(self) -> list[tuple[VacGraph, int]]:
        return sorted(self.items(), key=lambda kv: kv[0].adjacency)


def expand_labeled(A: PartialRcMatrix) -> dict[tuple, int]:
    """Labelled expansion: raw adjacency tuple -> summed weight.

    Depth-first over one block choice per row, accumulating the adjacency in
    place.  Vertex labels are the column indices of ``A``.
    """
    m = A.m
    per_row = [[(b.weight, np.array(b.increment, dtype=np.int64)) for b in
                _row_blocks_cached(row)] for row in A.rows]
    acc = np.zeros((m, m), dtype=np.int64)
    out: dict[tuple, int] = {}

    def rec(i, weight):
        if i == len(per_row):
            key = tuple(map(tuple, acc.tolist()))
            out[key] = out.get(key, 0) + weight
            return
        for w, inc in per_row[i]:
            acc[...] += inc
            rec(i + 1, weight * w)
            acc[...] -= inc

    rec(0, 1)
    return out


def _canonicalise(labeled: Mapping[tuple, int]) -> WeightedGraphSet:
    keys = list(labeled)
    out = WeightedGraphSet()
    for k, c in zip(keys, canonical_adjacencies(np.array(keys))):
        out.add(VacGraph(c), labeled[k])
    return out


def expand_representative(A: RcMatrix) -> WeightedGraphSet:
    """Graphs generated by ``A`` with their weights, merged up to isomorphism.

    The weights sum to ``(d!)^m``.
    """
    labeled = expand_labeled(A)
    expected = math.factorial(A.d) ** A.m
    if sum(labeled.values()) != expected:
        raise InvariantViolation(f"expansion weight {sum(labeled.values())} != {expected}")
    return _canonicalise(labeled)


def _assemble_chunk(reps) -> dict[tuple, int]:
    acc: dict[tuple, int] = {}
    for rows, d, scale in reps:
        for key, w in expand_labeled(RcMatrix(rows, d)).items():
            acc[key] = acc.get(key, 0) + scale * w
    return acc


def assemble_order(m: int, reps: Iterable | None = None, workers: int = 1
                   ) -> WeightedGraphSet:
    """Total multiplicities ``M_T`` of all order-``m`` vacuum graphs.

    Each class contributes its expansion scaled by orbit size and row
    factor.  Labelled graphs are accumulated first and canonicalised once at
    the end; the merge is a commutative sum, so the schedule does not matter.
    """
    if reps is None:
        from .enumeration import class_representatives
        reps = class_representatives(m, 4, workers=workers)
    jobs = [(r.rep.rows, r.rep.d, r.orbit_size * r.mult_factor) for r in reps]
    if workers > 1 and len(jobs) > 1:
        pieces = [jobs[k::4 * workers] for k in range(4 * workers)]
        acc: dict[tuple, int] = {}
        with ProcessPoolExecutor(max_workers=workers) as pool:
            for part in pool.map(_assemble_chunk, [p for p in pieces if p]):
                for key, w in part.items():
                    acc[key] = acc.get(key, 0) + w
    else:
        acc = _assemble_chunk(jobs)
    return _canonicalise(acc)
