"""Replay the reference tables for one order and report every check."""

from __future__ import annotations

import json
from collections import Counter

from . import reference as ref
from .birkhoff import decompositions, non_equivalence_test, signature, Verdict
from .enumeration import class_representatives, count_total, representatives_by_stage
from .expand import assemble_order, expand_labeled, expand_representative, mult_factor
from .graphs import (
    MultiplicityRecord,
    automorphism_sym_factor,
    component_profile,
    disconnected_sym_factor,
    merge,
)
from .matrix_core import (
    RcMatrix,
    are_equivalent,
    burnside_class_count,
    canonical_form,
    fixed_point_table,
)
from .oracle import MAX_WICK_ORDER, Check, OracleRefused, cross_check, double_factorial

SCHEMA_VERSION = 1
MAX_VERIFY_ORDER = 6


def _check(checks, name, passed, detail=""):
    checks.append(Check(name, bool(passed), detail))


def _triples(records, connected_only=False):
    return Counter((r.m_total, r.m_kleinert, r.sym_factor)
                   for r in records if r.connected or not connected_only)


def records_by_order(max_order: int, workers: int = 1) -> dict[int, list[MultiplicityRecord]]:
    return {k: merge([assemble_order(k, workers=workers)]) for k in range(1, max_order + 1)}


def check_disconnected_rule(records: list[MultiplicityRecord],
                            lower: dict[int, list[MultiplicityRecord]]) -> tuple[bool, str]:
    """Compare ``s`` of every disconnected graph with the product rule.

    Component symmetry factors are looked up in the lower-order records.
    """
    sym = {r.graph: r.sym_factor for recs in lower.values() for r in recs}
    bad, n = [], 0
    for r in records:
        if r.connected:
            continue
        n += 1
        profile = component_profile(r.graph)
        rule = disconnected_sym_factor((sym[g], c) for g, c in sorted(profile.items()))
        if rule != r.sym_factor:
            bad.append(f"{r.graph.compact()}: rule {rule} vs {r.sym_factor}")
    return not bad, "; ".join(bad) or f"{n} disconnected graphs"


def verify_order(m: int, oracle: bool = False, workers: int = 1) -> dict:
    """Run every check that applies to order ``m``; returns a JSON-ready dict."""
    if not 1 <= m <= MAX_VERIFY_ORDER:
        raise ValueError(f"verify supports orders 1..{MAX_VERIFY_ORDER}")
    if oracle and m > MAX_WICK_ORDER:
        raise OracleRefused(f"oracle cross-check refused for m={m}: limit is m={MAX_WICK_ORDER}")
    checks: list[Check] = []

    total = count_total(m)
    _check(checks, "total RC matrices", total == ref.TOTAL_COUNTS[m],
           f"{total} vs {ref.TOTAL_COUNTS[m]}")

    stages = representatives_by_stage(m, 4, workers)
    reps = class_representatives(m, 4, workers)
    _check(checks, "class count", len(reps) == ref.CLASS_COUNTS[m],
           f"{len(reps)} vs {ref.CLASS_COUNTS[m]}")
    osum = sum(r.orbit_size for r in reps)
    _check(checks, "sum of orbit sizes = total", osum == total, f"{osum} vs {total}")
    burn = burnside_class_count(m, 4)
    _check(checks, "Burnside class count", burn == len(reps), f"{burn} vs {len(reps)}")
    if m == 2:
        table = tuple(map(tuple, fixed_point_table(2).tolist()))
        _check(checks, "Burnside fixed points m=2", table == ref.BURNSIDE_M2, str(table))
    if m == 5:
        counts = tuple(len(s) for s in stages)
        _check(checks, "augmentation stage counts", counts == ref.STAGE_COUNTS_M5, str(counts))

    weights_ok = all(sum(expand_labeled(r.rep).values()) == 24 ** m for r in reps)
    _check(checks, "expansion weight 24^m per representative", weights_ok, f"{len(reps)} reps")

    records = merge([assemble_order(m, reps, workers=workers)])
    mk_sum = sum(r.m_kleinert for r in records)
    _check(checks, "sum M_K = (4m-1)!!", mk_sum == double_factorial(4 * m - 1),
           f"{mk_sum} vs {double_factorial(4 * m - 1)}")
    auto_ok = all(automorphism_sym_factor(r.graph) == r.sym_factor for r in records)
    _check(checks, "s agrees with automorphism count", auto_ok)
    n_conn = sum(r.connected for r in records)
    if m in ref.GRAPH_COUNTS:
        _check(checks, "distinct graphs", len(records) == ref.GRAPH_COUNTS[m],
               f"{len(records)} vs {ref.GRAPH_COUNTS[m]}")
    if m in ref.REGRESSION_GRAPH_COUNTS:
        _check(checks, "distinct graphs (regression)",
               len(records) == ref.REGRESSION_GRAPH_COUNTS[m],
               f"{len(records)} vs {ref.REGRESSION_GRAPH_COUNTS[m]}")
    if m in ref.CONNECTED_COUNTS:
        _check(checks, "connected graphs", n_conn == ref.CONNECTED_COUNTS[m],
               f"{n_conn} vs {ref.CONNECTED_COUNTS[m]}")

    if m > 1:
        lower = records_by_order(m - 1, workers)
        ok, detail = check_disconnected_rule(records, lower)
        _check(checks, "disconnected symmetry-factor rule", ok, detail)

    if m == 1:
        r = records[0]
        _check(checks, "single record M_K=3 s=8", (r.m_kleinert, r.sym_factor) == (3, 8),
               f"M_K={r.m_kleinert} s={r.sym_factor}")
    if m == 3:
        _verify_order3(checks, reps, records)
    if m == 4:
        _verify_order4(checks, records)
    if m == 5:
        got = _triples(records, connected_only=True)
        want = Counter(ref.M5_CONNECTED)
        _check(checks, "order-5 connected (M_T, M_K, s)", got == want,
               f"{sum(got.values())} graphs")

    if oracle:
        rep = cross_check(m, reps, workers)
        for c in rep.checks:
            _check(checks, f"oracle: {c.name}", c.passed, c.detail)

    return {
        "schema_version": SCHEMA_VERSION,
        "order": m,
        "passed": all(c.passed for c in checks),
        "checks": [{"name": c.name, "passed": c.passed, "detail": c.detail} for c in checks],
    }


def _verify_order3(checks, reps, records):
    by_form = {r.rep: r for r in reps}
    sizes, factors, expansions = [], [], []
    for rows in ref.M3_REPRESENTATIVES:
        A = RcMatrix(rows)
        cls = by_form[canonical_form(A)]
        sizes.append(cls.orbit_size)
        factors.append(mult_factor(A))
        expansions.append(tuple(sorted(expand_representative(A).values())))
    _check(checks, "order-3 class sizes", tuple(sizes) == ref.M3_ORBIT_SIZES, str(sizes))
    _check(checks, "order-3 row factors", tuple(factors) == ref.M3_FACTORS, str(factors))
    want = tuple(tuple(sorted(w)) for w in ref.M3_EXPANSION_WEIGHTS)
    _check(checks, "order-3 expansion weights", tuple(expansions) == want)
    _check(checks, "order-3 (M_T, M_K, s)", _triples(records) == Counter(ref.M3_RECORDS),
           f"{len(records)} graphs")
    diag = decompositions(RcMatrix(ref.DIAG3))
    _check(checks, "diag(4,4,4) decomposes only as 4*P1",
           len(diag) == 1 and diag[0].counts == (4,), str(diag[0]))
    two = decompositions(RcMatrix(ref.TWO_DECOMPOSITIONS))
    _check(checks, "two decompositions", len(two) == 2, "; ".join(map(str, two)))


def _verify_order4(checks, records):
    A = RcMatrix(ref.EXAMPLE_M4)
    exp = expand_representative(A)
    _check(checks, "example row factor", mult_factor(A) == ref.EXAMPLE_M4_FACTOR,
           str(mult_factor(A)))
    got = sorted(exp.values())
    _check(checks, "example expansion weights", got == sorted(ref.EXAMPLE_M4_WEIGHTS),
           f"{got}, total {sum(got)}")
    got_c = _triples(records, connected_only=True)
    _check(checks, "order-4 connected (M_T, M_K, s)", got_c == Counter(ref.M4_CONNECTED),
           f"{sum(got_c.values())} graphs")
    ua, ub = RcMatrix(ref.UNIQUE_A), RcMatrix(ref.UNIQUE_B)
    da, db = decompositions(ua), decompositions(ub)
    ok = (len(da) == len(db) == 1 and signature(da[0]) == signature(db[0])
          and non_equivalence_test(ua, ub) is Verdict.INCONCLUSIVE
          and not are_equivalent(ua, ub))
    _check(checks, "unique-decomposition counterexample", ok)


def dumps(result: dict) -> str:
    return json.dumps(result, indent=2, sort_keys=True) + "\n"
