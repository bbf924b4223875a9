"""Independent ground truth for small orders.

Wick pairings: ``m`` four-valent vertices give ``4m`` half-edges; every
perfect matching of them is a labelled vacuum graph, and the number of
matchings landing on an isomorphism class is its Kleinert multiplicity.

Class enumeration: every RC matrix is listed by nested loops and grouped by
explicitly generating its orbit, without the canonical-form machinery.
"""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from .graphs import VacGraph, canonical_adjacencies, merge
from .matrix_core import RcMatrix, all_permutations, compositions

MAX_WICK_ORDER = 5
MAX_NAIVE_ORDER = 4
MAX_BRUTE_CLASSES = 4


class OracleRefused(ValueError):
    pass


def double_factorial(n: int) -> int:
    return math.prod(range(n, 0, -2)) if n > 0 else 1


def _refuse(m: int, limit: int, what: str):
    if m < 1:
        raise ValueError("order must be positive")
    if m > limit:
        cost = double_factorial(4 * m - 1)
        raise OracleRefused(
            f"{what} refused for m={m}: limit is m={limit}; "
            f"{cost:.3e} pairings ((4m-1)!!) would be enumerated")


def _finish(labeled: dict[tuple, int]) -> list[tuple[VacGraph, int]]:
    keys = list(labeled)
    totals: dict[tuple, int] = {}
    for k, c in zip(keys, canonical_adjacencies(np.array(keys))):
        totals[c] = totals.get(c, 0) + labeled[k]
    return sorted(((VacGraph(k), v) for k, v in totals.items()), key=lambda kv: kv[0].adjacency)


def wick_pairings_naive(m: int, valence: int = 4) -> list[tuple[VacGraph, int]]:
    """One leaf per perfect matching of the half-edges (no grouping at all).

    Cost is ``(valence*m - 1)!!`` leaves; refused above ``m = 4``.
    """
    _refuse(m, MAX_NAIVE_ORDER, "naive Wick enumeration")
    owner = [v for v in range(m) for _ in range(valence)]
    adj = [[0] * m for _ in range(m)]
    labeled: dict[tuple, int] = {}

    def rec(free):
        if not free:
            key = tuple(map(tuple, adj))
            labeled[key] = labeled.get(key, 0) + 1
            return
        a = free[0]
        for k in range(1, len(free)):
            i, j = owner[a], owner[free[k]]
            if i == j:
                adj[i][i] += 2
            else:
                adj[i][j] += 1
                adj[j][i] += 1
            rec(free[1:k] + free[k + 1:])
            if i == j:
                adj[i][i] -= 2
            else:
                adj[i][j] -= 1
                adj[j][i] -= 1

    rec(tuple(range(valence * m)))
    return _finish(labeled)


def wick_multiplicities(m: int, valence: int = 4) -> list[tuple[VacGraph, int]]:
    """Pairing counts per canonical graph at order ``m``.

    Same recursion as the naive version (lowest free half-edge against every
    later one), except that the free half-edges of one vertex are
    interchangeable: choosing any of the ``k`` free partners at vertex ``w``
    yields the same graph, so that branch is taken once with weight ``k``.
    Partial states are merged level by level.
    """
    _refuse(m, MAX_WICK_ORDER, "Wick enumeration")
    start = (tuple([valence] * m), tuple([0] * (m * m)))
    layer: dict[tuple, int] = {start: 1}
    for _ in range(valence * m // 2):
        nxt: dict[tuple, int] = {}
        for (free, adj), count in layer.items():
            v = next(i for i, f in enumerate(free) if f)
            for w in range(v, m):
                partners = free[w] - 1 if w == v else free[w]
                if partners <= 0:
                    continue
                f2 = list(free)
                f2[v] -= 1
                f2[w] -= 1
                a2 = list(adj)
                if w == v:
                    a2[v * m + v] += 2
                else:
                    a2[v * m + w] += 1
                    a2[w * m + v] += 1
                key = (tuple(f2), tuple(a2))
                nxt[key] = nxt.get(key, 0) + count * partners
        layer = nxt
    labeled = {tuple(tuple(adj[i * m:(i + 1) * m]) for i in range(m)): c
               for (_, adj), c in layer.items()}
    return _finish(labeled)


# --------------------------------------------------------------------------
# Brute-force classes
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class BruteClass:
    rep: RcMatrix
    orbit_size: int


def _orbit(mat: np.ndarray, perms: np.ndarray) -> set[bytes]:
    out = set()
    for p in perms:
        rowp = mat[p]
        for q in perms:
            out.add(rowp[:, q].tobytes())
    return out


def brute_force_classes(m: int, d: int = 4) -> list[BruteClass]:
    """Classes found by listing all RC matrices and sweeping out orbits.

    The representative of a class is its row-major minimum.
    """
    if m > MAX_BRUTE_CLASSES:
        raise OracleRefused(f"brute-force class enumeration limited to m <= {MAX_BRUTE_CLASSES}")
    rows = list(compositions(d, m))
    perms = all_permutations(m)
    unseen: set[bytes] = set()
    for combo in itertools.product(rows, repeat=m):
        if all(sum(col) == d for col in zip(*combo)):
            unseen.add(np.array(combo, dtype=np.int8).tobytes())
    out = []
    while unseen:
        key = next(iter(unseen))
        orbit = _orbit(np.frombuffer(key, dtype=np.int8).reshape(m, m), perms)
        unseen -= orbit
        rep = min(tuple(np.frombuffer(k, dtype=np.int8).tolist()) for k in orbit)
        out.append(BruteClass(RcMatrix(np.array(rep).reshape(m, m), d), len(orbit)))
    return sorted(out, key=lambda c: c.rep.key())


# --------------------------------------------------------------------------
# Cross-check report
# --------------------------------------------------------------------------


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""


@dataclass
class CrossCheckReport:
    order: int
    checks: list[Check] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {"order": self.order, "passed": self.passed,
                "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail}
                           for c in self.checks]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_text(self) -> str:
        lines = [f"cross-check m={self.order}: {'PASS' if self.passed else 'FAIL'}"]
        for c in self.checks:
            lines.append(f"  [{'PASS' if c.passed else 'FAIL'}] {c.name}"
                         + (f": {c.detail}" if c.detail else ""))
        return "\n".join(lines)


def _first_divergence(a: dict, b: dict) -> str:
    for k in sorted(set(a) | set(b)):
        if a.get(k) != b.get(k):
            return f"first divergence at {k}: {a.get(k)} vs {b.get(k)}"
    return ""


def cross_check(m: int, reps: Iterable | None = None, workers: int = 1) -> CrossCheckReport:
    """Compare the main pipeline against the oracles at order ``m``."""
    from .enumeration import class_representatives
    from .expand import assemble_order

    _refuse(m, MAX_WICK_ORDER, "cross-check")
    report = CrossCheckReport(m)
    reps = list(reps) if reps is not None else class_representatives(m, 4, workers=workers)

    if m <= MAX_BRUTE_CLASSES:
        pipe = {r.rep.rows: r.orbit_size for r in reps}
        brute = {c.rep.rows: c.orbit_size for c in brute_force_classes(m)}
        report.checks.append(Check("classes vs brute force", pipe == brute,
                                   _first_divergence(pipe, brute) or f"{len(pipe)} classes"))

    records = merge([assemble_order(m, reps)])
    pipe_mk = {r.graph.compact(): r.m_kleinert for r in records}
    wick = {g.compact(): c for g, c in wick_multiplicities(m)}
    report.checks.append(Check("M_K vs Wick pairings", pipe_mk == wick,
                               _first_divergence(pipe_mk, wick) or f"{len(wick)} graphs matched"))

    total = sum(pipe_mk.values())
    expected = double_factorial(4 * m - 1)
    report.checks.append(Check("sum M_K = (4m-1)!!", total == expected,
                               f"{total} vs {expected}"))
    return report
