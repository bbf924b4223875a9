"""RC matrices and the row x column permutation action on them.

An RC matrix is a non-negative integer matrix whose rows and columns all sum
to the same margin ``d``.  Two matrices are equivalent when one is obtained
from the other by permuting rows and permuting columns independently.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

import numpy as np


class InvariantViolation(RuntimeError):
    """Raised when an internal consistency check fails (signals a bug)."""


# --------------------------------------------------------------------------
# Permutations
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Permutation:
    """A bijection on ``{0, ..., size-1}`` stored in one-line notation.

    ``mapping[i]`` is the image of ``i``.  The associated permutation matrix
    has a one at ``(i, mapping[i])``.
    """

    mapping: tuple[int, ...]

    def __post_init__(self):
        mapping = tuple(int(x) for x in self.mapping)
        if sorted(mapping) != list(range(len(mapping))) or not mapping:
            raise ValueError(f"not a permutation: {self.mapping!r}")
        object.__setattr__(self, "mapping", mapping)

    @classmethod
    def identity(cls, size: int) -> "Permutation":
        return cls(tuple(range(size)))

    @classmethod
    def from_one_line(cls, images: Sequence[int]) -> "Permutation":
        """Build from 1-based one-line notation, e.g. ``(2, 1, 3)``."""
        return cls(tuple(int(x) - 1 for x in images))

    @classmethod
    def from_matrix(cls, matrix) -> "Permutation":
        arr = np.asarray(matrix)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError("permutation matrix must be square")
        if not ((arr == 0) | (arr == 1)).all() or not (arr.sum(0) == 1).all() \
                or not (arr.sum(1) == 1).all():
            raise ValueError("not a permutation matrix")
        return cls(tuple(int(j) for j in arr.argmax(axis=1)))

    @property
    def size(self) -> int:
        return len(self.mapping)

    def matrix(self) -> np.ndarray:
        out = np.zeros((self.size, self.size), dtype=np.int64)
        out[np.arange(self.size), self.mapping] = 1
        return out

    def inverse(self) -> "Permutation":
        inv = [0] * self.size
        for i, j in enumerate(self.mapping):
            inv[j] = i
        return Permutation(tuple(inv))

    def one_line(self) -> str:
        """1-based one-line notation, e.g. ``"2 1 3"``."""
        return " ".join(str(j + 1) for j in self.mapping)

    def __str__(self):
        return f"[{self.one_line()}]"


@lru_cache(maxsize=None)
def all_permutations(size: int) -> np.ndarray:
    """All permutations of ``range(size)`` in lexicographic order.

    The array is shared and read-only; shape ``(size!, size)``.
    """
    arr = np.array(list(itertools.permutations(range(size))), dtype=np.int64)
    arr = arr.reshape(math.factorial(size), size)
    arr.setflags(write=False)
    return arr


# --------------------------------------------------------------------------
# Matrices
# --------------------------------------------------------------------------


def _as_rows(entries) -> tuple[tuple[int, ...], ...]:
    arr = np.asarray(entries)
    if arr.ndim != 2:
        raise ValueError("matrix entries must be two-dimensional")
    return tuple(tuple(int(x) for x in row) for row in arr.tolist())


@dataclass(frozen=True, order=True)
class PartialRcMatrix:
    """An ``n x m`` matrix with row sums ``d`` and column sums at most ``d``."""

    rows: tuple[tuple[int, ...], ...]
    d: int = 4

    def __post_init__(self):
        object.__setattr__(self, "rows", _as_rows(self.rows))
        self._validate()

    def _validate(self):
        if not self.rows or not self.rows[0]:
            raise ValueError("empty matrix")
        width = len(self.rows[0])
        if any(len(r) != width for r in self.rows):
            raise ValueError("ragged matrix")
        if self.d < 1:
            raise ValueError("margin must be positive")
        if len(self.rows) > width:
            raise ValueError(f"{len(self.rows)} rows exceed width {width}")
        for i, row in enumerate(self.rows):
            if any(x < 0 or x > self.d for x in row):
                raise ValueError(f"row {i + 1} has an entry outside [0, {self.d}]")
            if sum(row) != self.d:
                raise ValueError(f"row {i + 1} sums to {sum(row)}, expected {self.d}")
        for j, col in enumerate(zip(*self.rows)):
            if sum(col) > self.d:
                raise ValueError(f"column {j + 1} sums to {sum(col)} > {self.d}")

    @property
    def n(self) -> int:
        return len(self.rows)

    @property
    def m(self) -> int:
        return len(self.rows[0])

    @property
    def array(self) -> np.ndarray:
        return np.array(self.rows, dtype=np.int8)

    def column_sums(self) -> tuple[int, ...]:
        return tuple(sum(col) for col in zip(*self.rows))

    def key(self) -> tuple[int, ...]:
        """Row-major entries; the ordering used for canonical forms."""
        return tuple(x for row in self.rows for x in row)

    def __str__(self):
        return "\n".join(" ".join(str(x) for x in row) for row in self.rows)


@dataclass(frozen=True, order=True)
class RcMatrix(PartialRcMatrix):
    """A square matrix whose rows and columns all sum to ``d``."""

    def _validate(self):
        super()._validate()
        if self.n != self.m:
            raise ValueError(f"RC matrix must be square, got {self.n}x{self.m}")
        for j, s in enumerate(self.column_sums()):
            if s != self.d:
                raise ValueError(f"column {j + 1} sums to {s}, expected {self.d}")

    @classmethod
    def diagonal(cls, m: int, d: int = 4) -> "RcMatrix":
        return cls(tuple(tuple(d if i == j else 0 for j in range(m)) for i in range(m)), d)


def apply_perm(A: PartialRcMatrix, row_perm: Permutation, col_perm: Permutation):
    """Return ``P_row . A . P_col`` as a matrix of the same type as ``A``."""
    if row_perm.size != A.n or col_perm.size != A.m:
        raise ValueError(
            f"permutation sizes ({row_perm.size}, {col_perm.size}) do not match "
            f"matrix shape ({A.n}, {A.m})")
    out = row_perm.matrix() @ A.array.astype(np.int64) @ col_perm.matrix()
    return type(A)(_as_rows(out), A.d)


# --------------------------------------------------------------------------
# Canonical forms
#
# For a fixed column order the row-major minimum over row permutations is the
# matrix with its rows sorted ascending, so the full (n! * m!) scan collapses
# to m! column permutations followed by a row sort.  Rows are encoded by their
# rank in the lexicographically sorted table of compositions of d, and a whole
# sorted matrix packs into one int64 whose numeric order is the row-major
# lexicographic order.
# --------------------------------------------------------------------------


def compositions(total: int, parts: int, caps: Sequence[int] | None = None
                 ) -> Iterator[tuple[int, ...]]:
    """Compositions of ``total`` into ``parts`` non-negative parts, lex order.

    ``caps`` optionally bounds each part from above.
    """
    if caps is None:
        caps = (total,) * parts

    def rec(i, left):
        if i == parts - 1:
            if left <= caps[i]:
                yield (left,)
            return
        for v in range(min(left, caps[i]) + 1):
            for rest in rec(i + 1, left - v):
                yield (v,) + rest

    if parts == 0:
        if total == 0:
            yield ()
        return
    yield from rec(0, total)


class _RowCodec:
    """Rank table of all length-``m`` rows summing to ``d``."""

    def __init__(self, m: int, d: int):
        self.m, self.d = m, d
        self.rows = np.array(list(compositions(d, m)), dtype=np.int64)
        self.rank = {tuple(r): k for k, r in enumerate(self.rows.tolist())}
        self.bits = max(1, (len(self.rows) - 1).bit_length())
        perms = all_permutations(m)
        # permuted[p, r] = rank of row r with its columns reordered by perms[p]
        permuted = self.rows[:, perms]  # (R, P, m)
        self.permuted = np.empty((len(perms), len(self.rows)), dtype=np.int64)
        for r in range(len(self.rows)):
            self.permuted[:, r] = [self.rank[tuple(x)] for x in permuted[r].tolist()]

    def packable(self, n: int) -> bool:
        return n * self.bits <= 62

    def encode(self, mats: np.ndarray) -> np.ndarray:
        """(N, n, m) matrices -> (N, n) row ranks."""
        n_mats, n = mats.shape[:2]
        base = (self.d + 1) ** np.arange(self.m - 1, -1, -1, dtype=np.int64)
        codes = mats.reshape(n_mats * n, self.m).astype(np.int64) @ base
        table = self.rows @ base
        order = np.argsort(table)
        idx = np.searchsorted(table[order], codes)
        return order[idx].reshape(n_mats, n)

    def decode(self, ranks: Sequence[int]) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(int(x) for x in self.rows[r]) for r in ranks)


@lru_cache(maxsize=None)
def _codec(m: int, d: int) -> _RowCodec:
    return _RowCodec(m, d)


def _pack(sorted_ranks: np.ndarray, bits: int) -> np.ndarray:
    n = sorted_ranks.shape[-1]
    shifts = (bits * np.arange(n - 1, -1, -1)).astype(np.int64)
    return (sorted_ranks << shifts).sum(axis=-1)


def _unpack(key: int, n: int, bits: int) -> list[int]:
    mask = (1 << bits) - 1
    return [(key >> (bits * (n - 1 - k))) & mask for k in range(n)]


def canonical_batch(mats: np.ndarray, d: int, chunk: int = 0
                    ) -> tuple[list[tuple[tuple[int, ...], ...]], np.ndarray]:
    """Canonical forms of a batch of equal-shape matrices with row sums ``d``.

    Args:
        mats: integer array of shape ``(N, n, m)``.
        d: the common row sum.
        chunk: batch size per vectorised pass (0 picks a memory-safe default).

    Returns:
        ``(forms, stab)`` where ``forms[k]`` is the row tuple of the canonical
        form of ``mats[k]`` and ``stab[k]`` the order of its stabiliser in
        ``S_n x S_m``.
    """
    mats = np.asarray(mats)
    n_mats, n, m = mats.shape
    codec = _codec(m, d)
    if not codec.packable(n):
        return _canonical_batch_slow(mats, d)
    ranks = codec.encode(mats)
    row_stab = np.ones(n_mats, dtype=np.int64)
    srt = np.sort(ranks, axis=1)
    # rows repeated k times contribute k! row permutations to the stabiliser
    run = np.ones(n_mats, dtype=np.int64)
    for k in range(1, n):
        same = srt[:, k] == srt[:, k - 1]
        run = np.where(same, run + 1, 1)
        row_stab *= run
    n_perm = codec.permuted.shape[0]
    if chunk <= 0:
        chunk = max(1, 4_000_000 // (n_perm * n))
    forms: list = []
    col_stab = np.empty(n_mats, dtype=np.int64)
    for lo in range(0, n_mats, chunk):
        block = ranks[lo:lo + chunk]
        images = codec.permuted[:, block]  # (P, B, n)
        images.sort(axis=2)
        keys = _pack(images, codec.bits)  # (P, B)
        best = keys.min(axis=0)
        ident = keys[0]  # perms[0] is the identity
        col_stab[lo:lo + len(block)] = (keys == ident).sum(axis=0)
        forms.extend(codec.decode(_unpack(int(k), n, codec.bits)) for k in best)
    return forms, col_stab * row_stab


def _canonical_batch_slow(mats, d):
    perms = all_permutations(mats.shape[2])
    forms, stabs = [], []
    for mat in mats:
        best, hits, own = None, 0, tuple(sorted(map(tuple, mat.tolist())))
        for p in perms:
            img = tuple(sorted(map(tuple, mat[:, p].tolist())))
            if best is None or img < best:
                best = img
            hits += img == own
        counts = {}
        for row in own:
            counts[row] = counts.get(row, 0) + 1
        forms.append(best)
        stabs.append(hits * math.prod(math.factorial(c) for c in counts.values()))
    return forms, np.array(stabs, dtype=np.int64)


def canonical_form(A: PartialRcMatrix):
    """The row-major lexicographic minimum of the orbit of ``A``.

    Idempotent and constant on orbits of ``S_n x S_m``.
    """
    forms, _ = canonical_batch(A.array[None], A.d)
    return type(A)(forms[0], A.d)


def stabilizer_order(A: PartialRcMatrix) -> int:
    _, stab = canonical_batch(A.array[None], A.d)
    return int(stab[0])


def group_order(n: int, m: int) -> int:
    return math.factorial(n) * math.factorial(m)


def orbit_size(A: PartialRcMatrix) -> int:
    """Number of distinct matrices ``P_i . A . P_j``."""
    total = group_order(A.n, A.m)
    stab = stabilizer_order(A)
    if total % stab:
        raise InvariantViolation(f"stabiliser order {stab} does not divide {total}")
    return total // stab


def are_equivalent(A: PartialRcMatrix, B: PartialRcMatrix) -> bool:
    if (A.n, A.m, A.d) != (B.n, B.m, B.d):
        raise ValueError("matrices differ in shape or margin")
    return canonical_form(A) == canonical_form(B)


# --------------------------------------------------------------------------
# Burnside counting
# --------------------------------------------------------------------------


def iter_rc_arrays(m: int, d: int = 4) -> Iterator[np.ndarray]:
    """Every ``m x m`` RC matrix with margin ``d`` (row-by-row backtracking)."""
    rows: list[tuple[int, ...]] = []

    def rec(caps):
        if len(rows) == m:
            yield np.array(rows, dtype=np.int8)
            return
        if len(rows) == m - 1:
            last = tuple(caps)
            if sum(last) == d:
                rows.append(last)
                yield np.array(rows, dtype=np.int8)
                rows.pop()
            return
        for row in compositions(d, m, caps):
            rows.append(row)
            yield from rec([c - x for c, x in zip(caps, row)])
            rows.pop()

    yield from rec([d] * m)


def fixed_point_table(m: int, d: int = 4) -> np.ndarray:
    """``n(i, j)``: matrices fixed by ``(P_i, P_j)``, direct scan.

    Rows/columns are indexed by permutations in lexicographic order, so
    index 0 is the identity.
    """
    X = np.array(list(iter_rc_arrays(m, d)), dtype=np.int8)
    perms = all_permutations(m)
    table = np.zeros((len(perms), len(perms)), dtype=np.int64)
    for i, p in enumerate(perms):
        # P_i . A has rows A[p]; A . P_j has columns A[:, inverse(p_j)]
        left = X[:, p, :]
        for j, q in enumerate(perms):
            inv = np.argsort(q)
            table[i, j] = int((left[:, :, inv] == X).all(axis=(1, 2)).sum())
    return table


def _cycle_types(m: int) -> Iterator[tuple[tuple[int, ...], int]]:
    """Yield (cycle lengths, number of permutations with that type)."""

    def parts(left, largest):
        if left == 0:
            yield ()
            return
        for k in range(min(left, largest), 0, -1):
            for rest in parts(left - k, k):
                yield (k,) + rest

    for lam in parts(m, m):
        denom = 1
        for k in set(lam):
            c = lam.count(k)
            denom *= k ** c * math.factorial(c)
        yield lam, math.factorial(m) // denom


def _fixed_count(rows: tuple[int, ...], cols: tuple[int, ...], d: int) -> int:
    """Matrices fixed by a row/column permutation pair of the given cycle types.

    A fixed matrix is constant on each orbit of cells.  Row cycle ``a`` and
    column cycle ``b`` give ``gcd(a, b)`` cell orbits, each putting ``b/g``
    cells in every row of the cycle and ``a/g`` cells in every column.
    """
    gs = [[math.gcd(a, b) for b in cols] for a in rows]

    @lru_cache(maxsize=None)
    def rec(i, caps):
        if i == len(rows):
            return 1 if not any(caps) else 0
        a = rows[i]
        total = 0

        def choose(j, left, caps_out, ways):
            nonlocal total
            if j == len(cols):
                if left == 0:
                    total += ways * rec(i + 1, tuple(caps_out))
                return
            g = gs[i][j]
            per_row, per_col = cols[j] // g, a // g
            y = 0
            while y * per_row <= left and y * per_col <= caps[j]:
                choose(j + 1, left - y * per_row, caps_out + [caps[j] - y * per_col],
                       ways * math.comb(y + g - 1, g - 1))
                y += 1

        choose(0, d, [], 1)
        return total

    return rec(0, (d,) * len(cols))


def burnside_class_count(m: int, d: int = 4, method: str = "auto") -> int:
    """Number of orbits of ``m x m`` RC matrices under row x column permutations.

    ``method`` is ``"direct"`` (fixed points by scanning every matrix against
    every group element), ``"cycles"`` (fixed points per pair of cycle types)
    or ``"auto"`` (direct for ``m <= 4``).
    """
    if m < 1 or d < 1:
        raise ValueError("m and d must be positive")
    if method == "auto":
        method = "direct" if m <= 4 else "cycles"
    if method == "direct":
        total = int(fixed_point_table(m, d).sum())
    elif method == "cycles":
        types = list(_cycle_types(m))
        total = sum(zr * zc * _fixed_count(lr, lc, d)
                    for lr, zr in types for lc, zc in types)
    else:
        raise ValueError(f"unknown method {method!r}")
    order = math.factorial(m) ** 2
    if total % order:
        raise InvariantViolation(f"Burnside sum {total} not divisible by {order}")
    return total // order


def parse_matrix_text(text: str) -> RcMatrix:
    """Parse the plain matrix format: header ``m d`` then ``m`` rows.

    Blank lines and ``#`` comments are ignored.  Errors name the line number.
    """
    lines = [(k + 1, ln.split("#", 1)[0].strip()) for k, ln in enumerate(text.splitlines())]
    lines = [(k, ln) for k, ln in lines if ln]
    if not lines:
        raise ValueError("line 1: empty matrix file, expected header 'm d'")

    def ints(lineno, line):
        try:
            return [int(tok) for tok in line.split()]
        except ValueError:
            raise ValueError(f"line {lineno}: expected integers, got {line!r}") from None

    lineno, header = lines[0]
    head = ints(lineno, header)
    if len(head) != 2:
        raise ValueError(f"line {lineno}: header must be 'm d'")
    m, d = head
    body = lines[1:]
    if len(body) != m:
        where = body[-1][0] if body else lineno
        raise ValueError(f"line {where}: expected {m} rows, found {len(body)}")
    rows = []
    for lineno, line in body:
        row = ints(lineno, line)
        if len(row) != m:
            raise ValueError(f"line {lineno}: expected {m} entries, found {len(row)}")
        if any(x < 0 for x in row) or sum(row) != d:
            raise ValueError(f"line {lineno}: row {row} must be non-negative and sum to {d}")
        rows.append(row)
    try:
        return RcMatrix(rows, d)
    except ValueError as exc:
        # row-level problems are caught above, so this is a column margin
        raise ValueError(f"line {body[-1][0]}: {exc}") from None


def format_matrix_text(A: PartialRcMatrix) -> str:
    return f"{A.m} {A.d}\n{A}\n"


def rows_of(matrices: Iterable[PartialRcMatrix]) -> np.ndarray:
    return np.array([A.rows for A in matrices], dtype=np.int8)
