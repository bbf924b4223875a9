"""End-to-end acceptance checks, one test per criterion.

Each test prints a PASS/FAIL line, and the lines are repeated in the
terminal summary.  Run alone with ``pytest tests/test_acceptance.py -v``.
"""

import contextlib
import subprocess
import sys
import time
from collections import Counter

import pytest

from conftest import ACCEPTANCE_LINES, records_for, reps_for
from rcms import reference as ref
from rcms.birkhoff import Verdict, decompositions, non_equivalence_test, signature
from rcms.enumeration import count_total
from rcms.expand import expand_labeled, expand_representative, mult_factor
from rcms.graphs import component_profile, disconnected_sym_factor
from rcms.matrix_core import (
    RcMatrix,
    are_equivalent,
    burnside_class_count,
    canonical_form,
    fixed_point_table,
)
from rcms.oracle import double_factorial, wick_multiplicities


@contextlib.contextmanager
def criterion(number, title):
    start = time.perf_counter()
    try:
        yield
    except BaseException:
        line = f"[FAIL] criterion {number:2d}: {title}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        raise
    line = f"[PASS] criterion {number:2d}: {title} ({time.perf_counter() - start:.1f}s)"
    ACCEPTANCE_LINES.append(line)
    print(line)


def triples(records, connected_only=False):
    return Counter((r.m_total, r.m_kleinert, r.sym_factor)
                   for r in records if r.connected or not connected_only)


def test_criterion_01_total_counts():
    with criterion(1, "total RC matrix counts m=1..6"):
        got = [count_total(m) for m in range(1, 6)]
        assert got == [1, 5, 120, 10147, 2224955]
        start = time.perf_counter()
        assert count_total(6) == 1047649905
        assert time.perf_counter() - start < 10


def test_criterion_02_class_counts():
    with criterion(2, "class counts m=1..6 and orbit sums"):
        start = time.perf_counter()
        small = [reps_for(m) for m in range(1, 6)]
        assert time.perf_counter() - start < 60
        assert [len(r) for r in small] == [1, 3, 9, 43, 264]
        for m, reps in enumerate(small, start=1):
            assert sum(r.orbit_size for r in reps) == count_total(m)
        start = time.perf_counter()
        six = reps_for(6)
        assert time.perf_counter() - start < 3600
        assert len(six) == 2804
        assert sum(r.orbit_size for r in six) == 1047649905


def test_criterion_03_order3_golden():
    with criterion(3, "order-3 classes, factors and graph triples"):
        by_form = {r.rep: r for r in reps_for(3)}
        assert len(by_form) == 9
        mats = [RcMatrix(rows) for rows in ref.M3_REPRESENTATIVES]
        assert len({canonical_form(A) for A in mats}) == 9
        sizes = [by_form[canonical_form(A)].orbit_size for A in mats]
        assert sizes == [6, 18, 9, 18, 12, 36, 6, 9, 6]
        assert [mult_factor(A) for A in mats] == [1, 16, 36, 192, 64, 288, 216, 864, 1728]
        records = records_for(3)
        assert len(records) == 7
        assert triples(records) == Counter([
            (1244160, 27, 3072), (29859840, 648, 128), (9953280, 216, 384),
            (79626240, 1728, 48), (119439360, 2592, 32), (159252480, 3456, 24),
            (79626240, 1728, 48)])


def test_criterion_04_order4_connected():
    with criterion(4, "order-4 connected graphs M_K and s"):
        conn = [r for r in records_for(4) if r.connected]
        assert len(conn) == 10
        assert Counter(r.m_kleinert for r in conn) == Counter(
            [62208, 248832, 165888, 165888, 248832, 497664, 124416, 55296, 62208, 248832])
        assert triples(conn) == Counter(ref.M4_CONNECTED)


def test_criterion_05_order5_and_6_graphs():
    with criterion(5, "order-5 graph triples, order-6 graph counts"):
        five = records_for(5)
        assert len(five) == 56
        assert sum(r.connected for r in five) == 28
        assert triples(five, connected_only=True) == Counter(ref.M5_CONNECTED)
        assert (27738979172352000, 7464960, 128) in triples(five)
        six = records_for(6)
        assert len(six) == 187
        assert sum(r.connected for r in six) == 97


def test_criterion_06_burnside():
    with criterion(6, "Burnside class counts"):
        assert fixed_point_table(2).tolist() == [[5, 1], [1, 5]]
        assert burnside_class_count(2, 4) == 3
        for m in range(1, 5):
            direct = burnside_class_count(m, 4, method="direct")
            assert direct == len(reps_for(m))


def test_criterion_07_wick_oracle():
    with criterion(7, "per-graph M_K equals Wick pairing counts"):
        for m in range(1, 6):
            pipe = {r.graph: r.m_kleinert for r in records_for(m)}
            assert pipe == dict(wick_multiplicities(m))
            assert sum(pipe.values()) == double_factorial(4 * m - 1)


def test_criterion_08_weight_conservation():
    with criterion(8, "expansion weight 24^m per representative"):
        for m in range(1, 6):
            for r in reps_for(m):
                assert sum(expand_labeled(r.rep).values()) == 24 ** m
        A = RcMatrix(ref.EXAMPLE_M4)
        assert mult_factor(A) == 6912
        weights = sorted(expand_representative(A).values())
        assert weights == [12288, 24576, 24576, 49152, 49152, 73728, 98304]
        assert sum(weights) == 331776


def test_criterion_09_birkhoff():
    with criterion(9, "Birkhoff decompositions and signatures"):
        (D,) = decompositions(RcMatrix(ref.DIAG3))
        assert D.counts == (4,) and D.terms[0][0].mapping == (0, 1, 2)
        assert len(decompositions(RcMatrix(ref.TWO_DECOMPOSITIONS))) == 2
        A, B = RcMatrix(ref.UNIQUE_A), RcMatrix(ref.UNIQUE_B)
        (da,), (db,) = decompositions(A), decompositions(B)
        assert signature(da) == signature(db)
        assert non_equivalence_test(A, B) is Verdict.INCONCLUSIVE
        assert are_equivalent(A, B) is False


def test_criterion_10_disconnected_rule():
    with criterion(10, "disconnected symmetry-factor rule m<=5"):
        sym = {r.graph: r.sym_factor for m in range(1, 6) for r in records_for(m)}
        checked = 0
        for m in range(2, 6):
            for r in records_for(m):
                if r.connected:
                    continue
                profile = component_profile(r.graph)
                assert disconnected_sym_factor(
                    (sym[g], c) for g, c in profile.items()) == r.sym_factor
                checked += 1
        assert checked == (3 - 2) + (7 - 4) + (20 - 10) + (56 - 28)


def _verify_json(threads):
    proc = subprocess.run(
        [sys.executable, "-m", "rcms.cli", "--threads", str(threads), "verify", "--order", "4"],
        capture_output=True, check=True)
    return proc.stdout


def test_criterion_11_determinism():
    with criterion(11, "verify --order 4 identical across thread counts"):
        one = _verify_json(1)
        assert b'"passed": true' in one
        assert _verify_json(1) == one
        assert _verify_json(4) == one


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v", "-s"]))
