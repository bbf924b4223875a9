import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from rcms.matrix_core import (
    InvariantViolation,
    PartialRcMatrix,
    Permutation,
    RcMatrix,
    all_permutations,
    apply_perm,
    are_equivalent,
    burnside_class_count,
    canonical_batch,
    canonical_form,
    compositions,
    fixed_point_table,
    format_matrix_text,
    iter_rc_arrays,
    orbit_size,
    parse_matrix_text,
    stabilizer_order,
)


def full_scan_min(A):
    """Row-major minimum over every (row, column) permutation pair."""
    arr = A.array
    best = None
    for p in itertools.permutations(range(A.n)):
        for q in itertools.permutations(range(A.m)):
            key = tuple(arr[list(p)][:, list(q)].ravel().tolist())
            if best is None or key < best:
                best = key
    return best


def full_orbit(A):
    arr = A.array
    return {arr[list(p)][:, list(q)].tobytes()
            for p in itertools.permutations(range(A.n))
            for q in itertools.permutations(range(A.m))}


@st.composite
def rc_matrices(draw, max_m=4, d=4):
    m = draw(st.integers(1, max_m))
    rows = []
    caps = [d] * m
    for i in range(m):
        if i == m - 1:
            rows.append(tuple(caps))
            break
        opts = list(compositions(d, m, caps))
        row = draw(st.sampled_from(opts))
        rows.append(row)
        caps = [c - x for c, x in zip(caps, row)]
    return RcMatrix(tuple(rows), d)


def perms_for(m):
    return st.permutations(list(range(m))).map(Permutation)


class TestPermutation:
    def test_one_line_round_trip(self):
        p = Permutation.from_one_line([2, 3, 1])
        assert p.mapping == (1, 2, 0)
        assert p.one_line() == "2 3 1"
        assert str(p) == "[2 3 1]"

    def test_matrix_and_inverse(self):
        p = Permutation((1, 2, 0))
        assert Permutation.from_matrix(p.matrix()) == p
        assert (p.matrix() @ p.inverse().matrix() == np.eye(3)).all()

    def test_rejects_non_permutation(self):
        with pytest.raises(ValueError):
            Permutation((0, 0, 1))

    def test_all_permutations_lexicographic(self):
        perms = all_permutations(3)
        assert perms.shape == (6, 3)
        assert perms[0].tolist() == [0, 1, 2]
        assert [tuple(p) for p in perms.tolist()] == sorted(itertools.permutations(range(3)))


class TestMatrixValidation:
    def test_rc_matrix_accepts_valid(self):
        A = RcMatrix(((3, 1), (1, 3)))
        assert A.m == 2 and A.column_sums() == (4, 4)

    @pytest.mark.parametrize("rows", [
        ((4, 0), (0, 3)),
        ((5, -1), (-1, 5)),
        ((4, 0), (4, 0)),
        ((4, 0, 0), (0, 4, 0)),
    ])
    def test_rc_matrix_rejects(self, rows):
        with pytest.raises(ValueError):
            RcMatrix(rows)

    def test_partial_allows_open_columns(self):
        P = PartialRcMatrix(((2, 2, 0),))
        assert P.n == 1 and P.column_sums() == (2, 2, 0)
        with pytest.raises(ValueError):
            PartialRcMatrix(((4, 0, 0), (4, 0, 0)))

    def test_diagonal(self):
        assert RcMatrix.diagonal(3).rows == ((4, 0, 0), (0, 4, 0), (0, 0, 4))


class TestApplyPerm:
    def test_matches_matrix_product(self):
        A = RcMatrix(((3, 1, 0), (0, 2, 2), (1, 1, 2)))
        p, q = Permutation((2, 0, 1)), Permutation((1, 2, 0))
        B = apply_perm(A, p, q)
        assert (B.array == p.matrix() @ A.array @ q.matrix()).all()
        assert isinstance(B, RcMatrix)

    def test_size_mismatch(self):
        with pytest.raises(ValueError):
            apply_perm(RcMatrix.diagonal(3), Permutation.identity(2), Permutation.identity(3))

    @given(rc_matrices(), st.data())
    def test_preserves_margins(self, A, data):
        p = data.draw(perms_for(A.m))
        q = data.draw(perms_for(A.m))
        B = apply_perm(A, p, q)
        assert set(B.array.sum(axis=0)) == {4} and set(B.array.sum(axis=1)) == {4}


class TestCanonicalForm:
    @pytest.mark.parametrize("rows", [
        ((4, 0, 0), (0, 3, 1), (0, 1, 3)),
        ((1, 2, 1), (2, 1, 1), (1, 1, 2)),
        ((1, 1, 1, 1), (3, 1, 0, 0), (0, 2, 1, 1), (0, 0, 2, 2)),
    ])
    def test_equals_full_scan(self, rows):
        A = RcMatrix(rows)
        assert canonical_form(A).key() == full_scan_min(A)

    def test_equals_full_scan_exhaustive_m3(self):
        for arr in iter_rc_arrays(3):
            A = RcMatrix(tuple(map(tuple, arr.tolist())))
            assert canonical_form(A).key() == full_scan_min(A)

    def test_partial_matrices(self):
        P = PartialRcMatrix(((0, 2, 2), (4, 0, 0)))
        assert canonical_form(P).key() == full_scan_min(P)

    @settings(max_examples=60, deadline=None)
    @given(rc_matrices(), st.data())
    def test_orbit_invariant_and_idempotent(self, A, data):
        p = data.draw(perms_for(A.m))
        q = data.draw(perms_for(A.m))
        C = canonical_form(A)
        assert canonical_form(apply_perm(A, p, q)) == C
        assert canonical_form(C) == C
        assert are_equivalent(A, apply_perm(A, p, q))

    @settings(max_examples=60, deadline=None)
    @given(rc_matrices())
    def test_orbit_stabilizer(self, A):
        size = len(full_orbit(A))
        assert orbit_size(A) == size
        assert stabilizer_order(A) * size == math.factorial(A.m) ** 2

    def test_batch_matches_single(self):
        arrs = np.array(list(iter_rc_arrays(3)), dtype=np.int8)
        forms, stab = canonical_batch(arrs, 4)
        for arr, f, s in zip(arrs, forms, stab):
            A = RcMatrix(tuple(map(tuple, arr.tolist())))
            assert canonical_form(A).rows == f
            assert stabilizer_order(A) == s

    def test_are_equivalent_shape_mismatch(self):
        with pytest.raises(ValueError):
            are_equivalent(RcMatrix.diagonal(2), RcMatrix.diagonal(3))


class TestBurnside:
    def test_fixed_point_table_m2(self):
        assert fixed_point_table(2).tolist() == [[5, 1], [1, 5]]
        assert burnside_class_count(2, 4, method="direct") == 3

    @pytest.mark.parametrize("m", [1, 2, 3, 4])
    def test_direct_equals_cycles(self, m):
        assert burnside_class_count(m, method="direct") == burnside_class_count(m, method="cycles")

    @pytest.mark.parametrize("m,d", [(2, 2), (3, 2), (3, 3), (4, 2)])
    def test_other_margins_against_orbit_sweep(self, m, d):
        seen, classes = set(), 0
        for arr in iter_rc_arrays(m, d):
            key = arr.tobytes()
            if key in seen:
                continue
            classes += 1
            seen |= full_orbit(RcMatrix(tuple(map(tuple, arr.tolist())), d))
        assert burnside_class_count(m, d) == classes

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            burnside_class_count(2, method="bogus")


class TestCompositions:
    def test_lex_order_and_count(self):
        rows = list(compositions(4, 3))
        assert rows == sorted(rows)
        assert len(rows) == math.comb(6, 2)

    def test_caps(self):
        assert list(compositions(4, 2, (3, 4))) == [(0, 4), (1, 3), (2, 2), (3, 1)]


class TestMatrixText:
    def test_round_trip(self):
        A = RcMatrix(((3, 1), (1, 3)))
        assert parse_matrix_text(format_matrix_text(A)) == A

    def test_comments_and_blank_lines(self):
        text = "# example\n2 4\n\n4 0  # first\n0 4\n"
        assert parse_matrix_text(text) == RcMatrix.diagonal(2)

    @pytest.mark.parametrize("text,fragment", [
        ("2 4\n4 0\n0 3\n", "line 3"),
        ("2 4\n4 0\n", "rows"),
        ("2 4\n4 x\n0 4\n", "line 2"),
        ("", "header"),
    ])
    def test_errors_name_the_problem(self, text, fragment):
        with pytest.raises(ValueError, match=fragment):
            parse_matrix_text(text)
