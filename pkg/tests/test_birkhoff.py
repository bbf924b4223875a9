import itertools
from collections import Counter, defaultdict

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rcms.birkhoff import (
    DecompSignature,
    Decomposition,
    Verdict,
    decompositions,
    matchings,
    non_equivalence_test,
    overlap,
    report,
    signature,
    signature_multiset,
)
from rcms.matrix_core import (
    Permutation,
    RcMatrix,
    all_permutations,
    apply_perm,
    are_equivalent,
    canonical_form,
    iter_rc_arrays,
)

DIAG3 = RcMatrix(((4, 0, 0), (0, 4, 0), (0, 0, 4)))
TWO = RcMatrix(((1, 2, 1), (2, 1, 1), (1, 1, 2)))
UNIQUE_A = RcMatrix(((2, 1, 1, 0), (0, 0, 2, 2), (0, 2, 0, 2), (2, 1, 1, 0)))
UNIQUE_B = RcMatrix(((2, 1, 1, 0), (0, 1, 1, 2), (0, 2, 2, 0), (2, 0, 0, 2)))


def brute_decomposition_counts(m, d=4):
    """Matrix -> number of multisets of d permutation matrices summing to it."""
    perms = all_permutations(m)
    mats = np.zeros((len(perms), m, m), dtype=np.int8)
    mats[np.arange(len(perms))[:, None], np.arange(m), perms] = 1
    out = Counter()
    for combo in itertools.combinations_with_replacement(range(len(perms)), d):
        out[mats[list(combo)].sum(axis=0, dtype=np.int8).tobytes()] += 1
    return out


def as_matrix(arr):
    return RcMatrix(tuple(map(tuple, arr.tolist())))


class TestMatchings:
    def test_diagonal_has_one(self):
        assert matchings(DIAG3) == [Permutation.identity(3)]

    def test_full_support(self):
        assert len(matchings(TWO)) == 6

    def test_residual_rows(self):
        assert len(matchings(((1, 1), (1, 1)))) == 2

    def test_rejects_irregular(self):
        with pytest.raises(ValueError):
            matchings(((1, 0), (1, 1)))


class TestDecompositions:
    def test_diagonal(self):
        (D,) = decompositions(DIAG3)
        assert D.counts == (4,)
        assert str(D) == "4*[1 2 3]"

    def test_two(self):
        decs = decompositions(TWO)
        assert len(decs) == 2
        assert all(D.matrix() == TWO for D in decs)

    def test_unique_pair(self):
        for A in (UNIQUE_A, UNIQUE_B):
            (D,) = decompositions(A)
            assert D.counts == (1, 1, 1, 1)

    @pytest.mark.parametrize("m", [2, 3, 4])
    def test_counts_match_brute_force(self, m):
        brute = brute_decomposition_counts(m)
        for arr in iter_rc_arrays(m):
            assert len(decompositions(as_matrix(arr))) == brute[arr.astype(np.int8).tobytes()]

    def test_decomposition_validation(self):
        p = Permutation.identity(2)
        with pytest.raises(ValueError):
            Decomposition(((p, 2), (p, 2)))
        with pytest.raises(ValueError):
            Decomposition(((p, 0),))


class TestSignatures:
    def test_overlap(self):
        assert overlap(Permutation((0, 1, 2)), Permutation((0, 2, 1))) == 1

    def test_unique_pair_signature(self):
        (da,), (db,) = decompositions(UNIQUE_A), decompositions(UNIQUE_B)
        assert signature(da) == signature(db)
        assert str(signature(da)) == "d=1,1,1,1;o=0,1,2,2,1,0"

    def test_signature_is_order_free(self):
        p, q, r = (Permutation(x) for x in ((0, 1, 2), (1, 2, 0), (0, 2, 1)))
        s1 = signature(Decomposition(((p, 2), (q, 1), (r, 1))))
        s2 = signature(Decomposition(((r, 1), (q, 1), (p, 2))))
        assert s1 == s2
        assert isinstance(s1, DecompSignature)

    @settings(max_examples=40, deadline=None)
    @given(st.sampled_from([a for a in iter_rc_arrays(4)][::37]), st.data())
    def test_equivariance(self, arr, data):
        A = as_matrix(arr)
        p = Permutation(data.draw(st.permutations(range(4))))
        q = Permutation(data.draw(st.permutations(range(4))))
        B = apply_perm(A, p, q)
        assert signature_multiset(A) == signature_multiset(B)
        assert non_equivalence_test(A, B) is Verdict.INCONCLUSIVE


class TestNonEquivalence:
    def test_sound_exhaustive_m3(self):
        by_class = defaultdict(set)
        for arr in iter_rc_arrays(3):
            A = as_matrix(arr)
            by_class[canonical_form(A)].add(frozenset(signature_multiset(A).items()))
        assert all(len(v) == 1 for v in by_class.values())

    def test_detects_some_inequivalence(self):
        assert non_equivalence_test(DIAG3, TWO) is Verdict.INEQUIVALENT

    def test_unique_pair_inconclusive_but_inequivalent(self):
        assert non_equivalence_test(UNIQUE_A, UNIQUE_B) is Verdict.INCONCLUSIVE
        assert not are_equivalent(UNIQUE_A, UNIQUE_B)

    def test_order_mismatch(self):
        with pytest.raises(ValueError):
            non_equivalence_test(DIAG3, RcMatrix.diagonal(2))


def test_report_layout():
    doc = report([UNIQUE_A, UNIQUE_B], ["a", "b"])
    assert [e["name"] for e in doc["matrices"]] == ["a", "b"]
    assert doc["pairs"] == [{"a": "a", "b": "b", "verdict": "Inconclusive", "equivalent": False}]
    terms = doc["matrices"][0]["decompositions"][0]["terms"]
    assert all(t["count"] == 1 for t in terms)
