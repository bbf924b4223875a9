"""Integer Birkhoff decompositions of RC matrices.

An RC matrix with margin ``d`` is a sum of ``d`` permutation matrices.  All
such sums (as multisets) are found by repeatedly peeling off a perfect
matching of the support, i.e. a permutation ``s`` with ``A[i, s(i)] >= 1``
for every row.  Decompositions are compared through a signature recording
the repeat counts and how many positions each pair of terms shares.
"""

from __future__ import annotations

import enum
import itertools
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

from .matrix_core import InvariantViolation, Permutation, RcMatrix, are_equivalent


@dataclass(frozen=True)
class Decomposition:
    """``A = sum_j count_j * P_j`` with distinct ``P_j`` and ``sum count_j = d``.

    ``terms`` is kept sorted by permutation mapping.
    """

    terms: tuple[tuple[Permutation, int], ...]

    def __post_init__(self):
        terms = tuple(sorted(self.terms, key=lambda t: t[0].mapping))
        perms = [p.mapping for p, _ in terms]
        if len(set(perms)) != len(perms):
            raise ValueError("permutations in a decomposition must be distinct")
        if any(c < 1 for _, c in terms):
            raise ValueError("repeat counts must be positive")
        if len({p.size for p, _ in terms}) > 1:
            raise ValueError("permutations of different sizes")
        object.__setattr__(self, "terms", terms)

    @property
    def d(self) -> int:
        return sum(c for _, c in self.terms)

    @property
    def counts(self) -> tuple[int, ...]:
        return tuple(sorted((c for _, c in self.terms), reverse=True))

    def matrix(self) -> RcMatrix:
        m = self.terms[0][0].size
        out = [[0] * m for _ in range(m)]
        for p, c in self.terms:
            for i, j in enumerate(p.mapping):
                out[i][j] += c
        return RcMatrix(out, self.d)

    def __str__(self):
        return " + ".join(f"{c}*{p}" if c > 1 else str(p) for p, c in self.terms)


def _support_matchings(residual: tuple[tuple[int, ...], ...]) -> list[tuple[int, ...]]:
    m = len(residual)
    out: list[tuple[int, ...]] = []
    used = [False] * m
    chosen: list[int] = []

    def rec(i):
        if i == m:
            out.append(tuple(chosen))
            return
        for j in range(m):
            if not used[j] and residual[i][j] > 0:
                used[j] = True
                chosen.append(j)
                rec(i + 1)
                chosen.pop()
                used[j] = False

    rec(0)
    return out


def matchings(A) -> list[Permutation]:
    """All permutations supported on the positive entries of ``A``.

    ``A`` is an :class:`RcMatrix` or a residual given as nested rows with
    equal positive row and column sums.  Permutations are listed in
    lexicographic order.
    """
    rows = A.rows if isinstance(A, RcMatrix) else tuple(tuple(r) for r in A)
    sums = {sum(r) for r in rows} | {sum(c) for c in zip(*rows)}
    if len(sums) != 1 or min(sums) < 1 or any(x < 0 for r in rows for x in r):
        raise ValueError("residual must be non-negative with equal positive margins")
    found = _support_matchings(rows)
    if not found:
        raise InvariantViolation("no perfect matching on a regular bipartite support")
    return [Permutation(p) for p in found]


@lru_cache(maxsize=4096)
def _peel(residual: tuple[tuple[int, ...], ...], floor: tuple[int, ...] | None
          ) -> frozenset[tuple[tuple[int, ...], ...]]:
    """Multisets (as sorted tuples) of matchings summing to ``residual``.

    Matchings are peeled in non-decreasing order, starting at ``floor``.
    """
    if not any(any(r) for r in residual):
        return frozenset({()})
    found = _support_matchings(residual)
    if not found:
        raise InvariantViolation("no perfect matching on a regular bipartite support")
    out = set()
    for p in found:
        if floor is not None and p < floor:
            continue
        rest = tuple(tuple(x - (j == p[i]) for j, x in enumerate(r))
                     for i, r in enumerate(residual))
        for tail in _peel(rest, p):
            out.add((p,) + tail)
    return frozenset(out)


def decompositions(A: RcMatrix) -> list[Decomposition]:
    """Every distinct multiset of ``d`` permutation matrices summing to ``A``.

    Sorted by the tuple of term mappings for reproducible output.
    """
    out = set()
    for seq in _peel(A.rows, None):
        counts = Counter(seq)
        out.add(tuple(sorted(counts.items())))
    decs = [Decomposition(tuple((Permutation(p), c) for p, c in terms)) for terms in sorted(out)]
    for D in decs:
        if D.matrix() != A:
            raise InvariantViolation("decomposition does not reproduce its matrix")
    return decs


def overlap(p: Permutation, q: Permutation) -> int:
    """Number of positions ``(i, p(i)) = (i, q(i))`` shared by two permutations."""
    return sum(a == b for a, b in zip(p.mapping, q.mapping))


@dataclass(frozen=True, order=True)
class DecompSignature:
    """Repeat counts and pairwise overlaps, minimised over term relabelings.

    ``counts[k]`` labels term ``k``; ``overlaps`` lists ``|P_i & P_j|`` for
    ``i < j`` in row-major order.
    """

    counts: tuple[int, ...]
    overlaps: tuple[int, ...]

    def __str__(self):
        return f"d={','.join(map(str, self.counts))};o={','.join(map(str, self.overlaps))}"


def signature(D: Decomposition) -> DecompSignature:
    terms = D.terms
    k = len(terms)
    ov = [[overlap(terms[a][0], terms[b][0]) for b in range(k)] for a in range(k)]
    best = None
    for order in itertools.permutations(range(k)):
        cand = DecompSignature(
            tuple(terms[a][1] for a in order),
            tuple(ov[order[a]][order[b]] for a in range(k) for b in range(a + 1, k)))
        if best is None or cand < best:
            best = cand
    return best


def signature_multiset(A: RcMatrix) -> Counter:
    return Counter(signature(D) for D in decompositions(A))


class Verdict(enum.Enum):
    INEQUIVALENT = "Inequivalent"
    INCONCLUSIVE = "Inconclusive"

    def __str__(self):
        return self.value


def non_equivalence_test(A: RcMatrix, B: RcMatrix) -> Verdict:
    """Sound test for inequivalence from decomposition signatures.

    Equivalent matrices have equal signature multisets, so a difference
    proves inequivalence.  Equal multisets prove nothing.
    """
    if (A.m, A.d) != (B.m, B.d):
        raise ValueError("matrices differ in order or margin")
    if signature_multiset(A) != signature_multiset(B):
        return Verdict.INEQUIVALENT
    return Verdict.INCONCLUSIVE


def report(matrices: Sequence[RcMatrix], names: Sequence[str] | None = None) -> dict:
    """JSON-ready summary of decompositions, signatures and pairwise verdicts."""
    if names is None:
        names = [f"A{k + 1}" for k in range(len(matrices))]
    entries = []
    for name, A in zip(names, matrices):
        decs = decompositions(A)
        entries.append({
            "name": name,
            "matrix": [list(r) for r in A.rows],
            "decompositions": [
                {"terms": [{"permutation": p.one_line(), "count": c} for p, c in D.terms],
                 "signature": str(signature(D))}
                for D in decs],
        })
    pairs = []
    for (na, A), (nb, B) in itertools.combinations(zip(names, matrices), 2):
        if (A.m, A.d) != (B.m, B.d):
            continue
        pairs.append({"a": na, "b": nb, "verdict": str(non_equivalence_test(A, B)),
                      "equivalent": are_equivalent(A, B)})
    return {"matrices": entries, "pairs": pairs}
