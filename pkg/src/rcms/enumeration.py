"""Equivalence-class representatives of RC matrices by row augmentation.

Representatives of ``n x m`` partial matrices (row sums ``d``, column sums at
most ``d``) are extended by every admissible new row and reduced back to one
canonical matrix per class of ``S_{n+1} x S_m``.  After ``m - 1`` rounds the
last row is forced and the survivors are the square representatives.
"""

from __future__ import annotations

import json
import logging
import math
import os
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

from . import __version__
from .matrix_core import (
    InvariantViolation,
    PartialRcMatrix,
    RcMatrix,
    canonical_batch,
    compositions,
    group_order,
)

log = logging.getLogger(__name__)

CHECKPOINT_FORMAT = "rcms-checkpoint"


class CheckpointError(RuntimeError):
    pass


@dataclass(frozen=True, order=True)
class ClassRep:
    """Canonical representative of a class with its size and row-product factor."""

    rep: RcMatrix
    orbit_size: int
    mult_factor: int

    def __post_init__(self):
        if group_order(self.rep.m, self.rep.m) % self.orbit_size:
            raise InvariantViolation(f"orbit size {self.orbit_size} does not divide (m!)^2")


def initial_rows(m: int, d: int = 4) -> list[PartialRcMatrix]:
    """One ``1 x m`` row per partition of ``d`` into at most ``m`` parts.

    Parts are written in non-increasing order and padded with zeros; the list
    runs from ``(d, 0, ...)`` down to the finest partition.
    """
    if m < 1:
        raise ValueError("m must be positive")

    def parts(left, largest):
        if left == 0:
            yield ()
            return
        for k in range(min(left, largest), 0, -1):
            for rest in parts(left - k, k):
                yield (k,) + rest

    return [PartialRcMatrix((p + (0,) * (m - len(p)),), d)
            for p in parts(d, d) if len(p) <= m]


@lru_cache(maxsize=None)
def _row_table(m: int, d: int) -> np.ndarray:
    return np.array(list(compositions(d, m)), dtype=np.int8)


def _extensions(parents: np.ndarray, d: int, final: bool) -> np.ndarray:
    """All one-row extensions of ``parents`` (shape ``(N, n, m)``).

    Candidate rows run in lexicographic order of compositions of ``d``.
    """
    n_par, n, m = parents.shape
    caps = d - parents.sum(axis=1, dtype=np.int64)  # (N, m)
    if final:
        # the last row of a square matrix is forced: it is the residual
        return np.concatenate([parents, caps[:, None, :].astype(np.int8)], axis=1)
    rows = _row_table(m, d)
    ok = (rows[None, :, :] <= caps[:, None, :]).all(axis=2)  # (N, R)
    pi, ri = np.nonzero(ok)
    out = np.empty((len(pi), n + 1, m), dtype=np.int8)
    out[:, :n] = parents[pi]
    out[:, n] = rows[ri]
    return out


def _reduce(candidates: np.ndarray, d: int) -> tuple[list[tuple], list[int]]:
    """Canonicalise candidates and keep one per class (sorted by key)."""
    if len(candidates) == 0:
        return [], []
    # cheap pre-dedup: rows are unordered within a class
    srt = np.sort(candidates.reshape(len(candidates), -1).view(
        np.dtype((np.void, candidates.shape[2]))).reshape(candidates.shape[:2]), axis=1)
    _, first = np.unique(srt, axis=0, return_index=True)
    candidates = candidates[np.sort(first)]
    forms, stabs = canonical_batch(candidates, d)
    seen: dict[tuple, int] = {}
    for form, stab in zip(forms, stabs.tolist()):
        seen.setdefault(form, stab)
    keys = sorted(seen)
    return keys, [seen[k] for k in keys]


def _augment_chunk(args):
    parents, d, final = args
    return _reduce(_extensions(parents, d, final), d)


def _split(arr: np.ndarray, pieces: int) -> list[np.ndarray]:
    pieces = max(1, min(pieces, len(arr)))
    return [a for a in np.array_split(arr, pieces) if len(a)]


def _augment_arrays(parents: np.ndarray, d: int, final: bool, workers: int
                    ) -> tuple[list[tuple], list[int]]:
    if workers <= 1 or len(parents) < 64:
        return _augment_chunk((parents, d, final))
    merged: dict[tuple, int] = {}
    with ProcessPoolExecutor(max_workers=workers) as pool:
        jobs = [(chunk, d, final) for chunk in _split(parents, 4 * workers)]
        for keys, stabs in pool.map(_augment_chunk, jobs):
            for k, s in zip(keys, stabs):
                merged.setdefault(k, s)
    keys = sorted(merged)
    return keys, [merged[k] for k in keys]


def augment(reps: Sequence[PartialRcMatrix], workers: int = 1) -> list[PartialRcMatrix]:
    """Extend every representative by one row and reduce modulo equivalence.

    Returns one canonical ``(n+1) x m`` matrix per class, sorted.
    """
    if not reps:
        return []
    d = reps[0].d
    n, m = reps[0].n, reps[0].m
    if n >= m:
        raise ValueError("cannot add a row to a square matrix")
    parents = np.array([r.rows for r in reps], dtype=np.int8)
    final = n + 1 == m
    keys, _ = _augment_arrays(parents, d, final, workers)
    cls = RcMatrix if final else PartialRcMatrix
    return [cls(k, d) for k in keys]


# --------------------------------------------------------------------------
# Checkpoints
# --------------------------------------------------------------------------


def checkpoint_path(directory: str | os.PathLike, m: int, d: int, stage: int) -> Path:
    return Path(directory) / f"rcms_m{m}_d{d}_stage{stage}.jsonl"


def write_checkpoint(path: str | os.PathLike, m: int, d: int, stage: int,
                     reps: Iterable[PartialRcMatrix]) -> None:
    """Write a header record and one representative per line, atomically."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    header = {"format": CHECKPOINT_FORMAT, "m": m, "d": d, "stage": stage,
              "version": __version__}
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    with os.fdopen(fd, "w") as fh:
        fh.write(json.dumps(header, sort_keys=True) + "\n")
        for rep in reps:
            fh.write(json.dumps([list(r) for r in rep.rows]) + "\n")
    os.replace(tmp, path)


def read_checkpoint(path: str | os.PathLike, m: int | None = None, d: int | None = None
                    ) -> tuple[dict, list[PartialRcMatrix]]:
    """Load a checkpoint, refusing mismatched format, order, margin or version."""
    with open(path) as fh:
        lines = fh.read().splitlines()
    if not lines:
        raise CheckpointError(f"{path}: empty checkpoint")
    try:
        header = json.loads(lines[0])
    except json.JSONDecodeError as exc:
        raise CheckpointError(f"{path}: unreadable header: {exc}") from None
    if header.get("format") != CHECKPOINT_FORMAT:
        raise CheckpointError(f"{path}: not a checkpoint file")
    if header.get("version") != __version__:
        raise CheckpointError(
            f"{path}: written by version {header.get('version')}, this is {__version__}")
    if m is not None and header["m"] != m or d is not None and header["d"] != d:
        raise CheckpointError(f"{path}: checkpoint is for m={header['m']}, d={header['d']}")
    stage = header["stage"]
    cls = RcMatrix if stage == header["m"] else PartialRcMatrix
    reps = []
    for lineno, line in enumerate(lines[1:], start=2):
        try:
            reps.append(cls(json.loads(line), header["d"]))
        except (ValueError, json.JSONDecodeError) as exc:
            raise CheckpointError(f"{path}: line {lineno}: {exc}") from None
    return header, reps


def _latest_checkpoint(directory, m, d):
    for stage in range(m, 0, -1):
        path = checkpoint_path(directory, m, d, stage)
        if path.exists():
            return stage, path
    return None


# --------------------------------------------------------------------------
# Public entry points
# --------------------------------------------------------------------------


def representatives_by_stage(m: int, d: int = 4, workers: int = 1,
                             checkpoint_dir: str | os.PathLike | None = None
                             ) -> list[list[PartialRcMatrix]]:
    """Representatives after each augmentation round, ``n = 1 .. m``.

    With ``checkpoint_dir`` every completed stage is saved and a run resumes
    from the latest stage found there.  Stages before the resume point are
    returned as empty lists.
    """
    stages: list[list[PartialRcMatrix]] = []
    reps: list[PartialRcMatrix] = initial_rows(m, d)
    start = 1
    if checkpoint_dir is not None:
        found = _latest_checkpoint(checkpoint_dir, m, d)
        if found:
            start, path = found
            _, reps = read_checkpoint(path, m, d)
            log.info("resuming m=%d from stage %d (%d reps)", m, start, len(reps))
            stages.extend([] for _ in range(start - 1))
    if start == 1 and m == 1:
        reps = [RcMatrix(reps[0].rows, d)]
    stages.append(reps)
    if checkpoint_dir is not None and start == 1:
        write_checkpoint(checkpoint_path(checkpoint_dir, m, d, 1), m, d, 1, reps)
    for n in range(start, m):
        reps = augment(reps, workers=workers)
        log.info("m=%d stage %d: %d representatives", m, n + 1, len(reps))
        stages.append(reps)
        if checkpoint_dir is not None:
            write_checkpoint(checkpoint_path(checkpoint_dir, m, d, n + 1), m, d, n + 1, reps)
    return stages


def class_representatives(m: int, d: int = 4, workers: int = 1,
                          checkpoint_dir: str | os.PathLike | None = None) -> list[ClassRep]:
    """One :class:`ClassRep` per equivalence class of ``m x m`` RC matrices."""
    from .expand import mult_factor

    if m < 1:
        raise ValueError("m must be positive")
    squares = representatives_by_stage(m, d, workers, checkpoint_dir)[-1]
    arr = np.array([A.rows for A in squares], dtype=np.int8)
    forms, stabs = canonical_batch(arr, d)
    order = group_order(m, m)
    out = []
    for A, form, stab in zip(squares, forms, stabs.tolist()):
        if A.rows != form:
            raise InvariantViolation(f"representative is not canonical:\n{A}")
        out.append(ClassRep(A, order // stab, mult_factor(A)))
    return out


def count_total(m: int, d: int = 4) -> int:
    """Number of ``m x m`` RC matrices with margin ``d``.

    Row-by-row dynamic program whose state is the multiset of remaining
    column capacities; no matrix is materialised.
    """
    if m < 1:
        raise ValueError("m must be positive")

    @lru_cache(maxsize=None)
    def ways(rows_left: int, caps: tuple[int, ...]) -> int:
        if rows_left == 0:
            return 1 if not any(caps) else 0
        if sum(caps) != rows_left * d:
            return 0
        total = 0
        for row in _capped_rows(caps, d):
            nxt = tuple(sorted(c - x for c, x in zip(caps, row)))
            total += ways(rows_left - 1, nxt)
        return total

    return ways(m, (d,) * m)


@lru_cache(maxsize=None)
def _capped_rows(caps: tuple[int, ...], d: int) -> tuple[tuple[int, ...], ...]:
    return tuple(compositions(d, len(caps), caps))


def class_count(m: int, d: int = 4, workers: int = 1) -> int:
    return len(representatives_by_stage(m, d, workers)[-1])


def orbit_total(reps: Iterable[ClassRep]) -> int:
    return sum(r.orbit_size for r in reps)


def factorial_product(values: Iterable[int]) -> int:
    return math.prod(math.factorial(v) for v in values)
