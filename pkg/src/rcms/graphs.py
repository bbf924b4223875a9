"""Vacuum multigraphs: canonical labelling, merging and normalisation.

Graphs are stored as symmetric adjacency matrices whose diagonal holds twice
the number of loops at a vertex, so every row sums to the vertex degree.
"""

from __future__ import annotations

import csv
import io
import math
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np

from .matrix_core import InvariantViolation, all_permutations


@dataclass(frozen=True, order=True)
class VacGraph:
    adjacency: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        arr = np.asarray(self.adjacency)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] == 0:
            raise ValueError("adjacency must be a non-empty square matrix")
        if (arr < 0).any():
            raise ValueError("negative adjacency entry")
        if (arr != arr.T).any():
            raise ValueError("adjacency must be symmetric")
        if (np.diag(arr) % 2).any():
            raise ValueError("diagonal entries must be even (twice the loop count)")
        degrees = arr.sum(axis=1)
        if (degrees != degrees[0]).any() or degrees[0] == 0:
            raise ValueError(f"vertex degrees must be equal and positive, got {degrees.tolist()}")
        object.__setattr__(self, "adjacency", tuple(tuple(int(x) for x in r) for r in arr.tolist()))

    @property
    def size(self) -> int:
        return len(self.adjacency)

    @property
    def degree(self) -> int:
        return sum(self.adjacency[0])

    @property
    def array(self) -> np.ndarray:
        return np.array(self.adjacency, dtype=np.int64)

    def compact(self) -> str:
        """Rows joined by ``/``, e.g. ``"4 0/0 4"``."""
        return "/".join(" ".join(str(x) for x in row) for row in self.adjacency)

    def __str__(self):
        return "\n".join(" ".join(str(x) for x in row) for row in self.adjacency)


# --------------------------------------------------------------------------
# Canonical labelling
# --------------------------------------------------------------------------


@lru_cache(maxsize=None)
def _conjugation_index(m: int) -> np.ndarray:
    """Flat indices of the upper triangle of ``P A P^-1`` for every ``P``.

    For symmetric matrices the first row-major difference always lies on or
    above the diagonal, so the upper triangle in row-major order carries the
    full lexicographic order.
    """
    perms = all_permutations(m)
    iu, ju = np.triu_indices(m)
    idx = perms[:, iu] * m + perms[:, ju]
    idx.setflags(write=False)
    return idx


def _lex_min_rows(images: np.ndarray) -> np.ndarray:
    """Index of the lexicographically smallest row of each ``images[:, k]``."""
    n_img, n_mats, width = images.shape
    alive = np.ones((n_img, n_mats), dtype=bool)
    big = np.iinfo(images.dtype).max
    for col in range(width):
        vals = np.where(alive, images[:, :, col], big)
        alive &= vals == vals.min(axis=0)
    return alive.argmax(axis=0)


def canonical_adjacencies(mats: np.ndarray) -> list[tuple[tuple[int, ...], ...]]:
    """Canonical forms of a batch of ``(N, m, m)`` adjacency matrices."""
    mats = np.asarray(mats, dtype=np.int16)
    n_mats, m, _ = mats.shape
    if n_mats == 0:
        return []
    idx = _conjugation_index(m)
    iu, ju = np.triu_indices(m)
    out = []
    chunk = max(1, 2_000_000 // (idx.shape[0] * idx.shape[1]))
    for lo in range(0, n_mats, chunk):
        flat = mats[lo:lo + chunk].reshape(-1, m * m)
        images = flat[:, idx].transpose(1, 0, 2)  # (P, B, T)
        best = _lex_min_rows(images)
        tri = images[best, np.arange(images.shape[1])]
        for row in tri:
            full = np.zeros((m, m), dtype=np.int64)
            full[iu, ju] = row
            full[ju, iu] = row
            out.append(tuple(tuple(int(x) for x in r) for r in full.tolist()))
    return out


def graph_canonical_form(G: VacGraph) -> VacGraph:
    """Smallest row-major adjacency over all relabelings ``P G P^-1``."""
    return _canonical_cached(G.adjacency)


@lru_cache(maxsize=200_000)
def _canonical_cached(adjacency) -> VacGraph:
    return VacGraph(canonical_adjacencies(np.array([adjacency]))[0])


def are_isomorphic(G: VacGraph, H: VacGraph) -> bool:
    return G.size == H.size and graph_canonical_form(G) == graph_canonical_form(H)


# --------------------------------------------------------------------------
# Components and symmetry factors
# --------------------------------------------------------------------------


def _component_vertex_sets(adj: Sequence[Sequence[int]]) -> list[list[int]]:
    m = len(adj)
    seen = [False] * m
    comps = []
    for start in range(m):
        if seen[start]:
            continue
        stack, comp = [start], []
        seen[start] = True
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in range(m):
                if w != v and adj[v][w] and not seen[w]:
                    seen[w] = True
                    stack.append(w)
        comps.append(sorted(comp))
    return comps


def connected_components(G: VacGraph) -> list[VacGraph]:
    """Components ordered by their smallest vertex, each re-indexed from 0."""
    out = []
    for verts in _component_vertex_sets(G.adjacency):
        out.append(VacGraph(tuple(tuple(G.adjacency[i][j] for j in verts) for i in verts)))
    return out


def is_connected(G: VacGraph) -> bool:
    return len(_component_vertex_sets(G.adjacency)) == 1


def disconnected_sym_factor(components: Iterable[tuple[int, int]]) -> int:
    """Symmetry factor of a disconnected graph from its component data.

    ``components`` holds ``(s_i, n_i)`` pairs: the symmetry factor of each
    distinct component and how many times it occurs.  The result is
    ``prod n_i! * s_i ** n_i``.
    """
    out = 1
    for s, count in components:
        if count < 1:
            raise ValueError("component counts must be positive")
        out *= math.factorial(count) * s ** count
    return out


def automorphism_sym_factor(G: VacGraph) -> int:
    """Symmetry factor from automorphisms: vertex relabelings fixing ``G``
    times edge and loop permutations and loop flips.

    Independent of multiplicity bookkeeping; used as a cross-check.
    """
    arr = G.array
    perms = all_permutations(G.size)
    fixed = (arr[perms[:, :, None], perms[:, None, :]] == arr).all(axis=(1, 2)).sum()
    out = int(fixed)
    for i in range(G.size):
        loops = arr[i, i] // 2
        out *= math.factorial(loops) * 2 ** loops
        for j in range(i + 1, G.size):
            out *= math.factorial(int(arr[i, j]))
    return out


# --------------------------------------------------------------------------
# Merging and normalisation
# --------------------------------------------------------------------------


def kleinert_divisor(m: int) -> int:
    """``(2m)! * 2^(2m)``: turns total multiplicities into pairing counts."""
    return math.factorial(2 * m) * 4 ** m


def symmetry_numerator(m: int, valence: int = 4) -> int:
    """``(valence!)^m * m! * (2m)! * 2^(2m)``."""
    return math.factorial(valence) ** m * math.factorial(m) * kleinert_divisor(m)


@dataclass(frozen=True)
class MultiplicityRecord:
    graph: VacGraph
    m_total: int
    m_kleinert: int
    sym_factor: int
    connected: bool

    @classmethod
    def from_total(cls, graph: VacGraph, m_total: int) -> "MultiplicityRecord":
        m = graph.size
        div = kleinert_divisor(m)
        num = symmetry_numerator(m, graph.degree)
        if m_total <= 0 or m_total % div:
            raise InvariantViolation(f"M_T={m_total} not divisible by (2m)!2^2m={div}")
        if num % m_total:
            raise InvariantViolation(f"M_T={m_total} does not divide {num}")
        return cls(graph, m_total, m_total // div, num // m_total, is_connected(graph))

    def sort_key(self):
        return (not self.connected, self.graph.adjacency)


def merge(sets: Iterable[Mapping[VacGraph, int]]) -> list[MultiplicityRecord]:
    """Sum multiplicities per isomorphism class and normalise.

    Each input maps graphs (any labelling) to integer multiplicities.  Output
    is sorted connected-first, then by canonical adjacency.
    """
    raw: dict[tuple, int] = {}
    for s in sets:
        for g, w in s.items():
            raw[g.adjacency] = raw.get(g.adjacency, 0) + w
    if not raw:
        return []
    sizes = {len(k) for k in raw}
    if len(sizes) != 1:
        raise ValueError(f"graph sets mix orders {sorted(sizes)}")
    keys = list(raw)
    canon = canonical_adjacencies(np.array(keys))
    totals: dict[tuple, int] = {}
    for k, c in zip(keys, canon):
        totals[c] = totals.get(c, 0) + raw[k]
    records = [MultiplicityRecord.from_total(VacGraph(c), t) for c, t in totals.items()]
    return sorted(records, key=MultiplicityRecord.sort_key)


def component_profile(G: VacGraph) -> Counter:
    """Multiset of canonical components."""
    return Counter(graph_canonical_form(c) for c in connected_components(G))


# --------------------------------------------------------------------------
# Export
# --------------------------------------------------------------------------


def to_dot(G: VacGraph, name: str = "G") -> str:
    """DOT text for ``G`` as an undirected multigraph.

    Vertices are emitted in index order; parallel edges and loops are
    repeated once per line, loops ``adjacency[i][i] / 2`` times.
    """
    lines = [f"graph {name} {{"]
    for i in range(G.size):
        lines.append(f"  v{i};")
    for i in range(G.size):
        for _ in range(G.adjacency[i][i] // 2):
            lines.append(f"  v{i} -- v{i};")
        for j in range(i + 1, G.size):
            for _ in range(G.adjacency[i][j]):
                lines.append(f"  v{i} -- v{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"


CSV_COLUMNS = ("order", "graph_id", "canonical_adjacency", "M_T", "M_K", "s", "connected")


def graph_id(order: int, index: int) -> str:
    return f"g{order}_{index}"


def records_to_csv(records: Sequence[MultiplicityRecord], ids: Sequence[str] | None = None) -> str:
    """CSV table; ``ids`` defaults to ``g<order>_<position>``."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for k, r in enumerate(records, start=1):
        m = r.graph.size
        gid = ids[k - 1] if ids is not None else graph_id(m, k)
        w.writerow([m, gid, r.graph.compact(), r.m_total, r.m_kleinert,
                    r.sym_factor, int(r.connected)])
    return buf.getvalue()


def records_to_dot(records: Sequence[MultiplicityRecord]) -> str:
    return "".join(to_dot(r.graph, graph_id(r.graph.size, k))
                   for k, r in enumerate(records, start=1))
