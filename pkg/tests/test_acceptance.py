"""Acceptance criteria 1-7.

Each test records a one-line verdict (printed in the "acceptance criteria"
section at the end of the pytest run) before asserting, so a red criterion
still reports what it saw.
"""

import random
import time
from fractions import Fraction as F

import pytest

from rbx.algebra import F3, M2, M3, is_product_closed
from rbx.campaigns import HOMOGENEITY_TABLE, homogeneity_table_checks, orbit_report, replay_conjugations
from rbx.catalog import SIX_TUPLE_GROUPS, build_catalog, get_entry
from rbx.exactlinalg import Mat, format_x_xplus1, kernel, x_xplus1_exponents
from rbx.morphisms import conjugate, inner
from rbx.operators import (check_idempotent_inclusion, check_ladder_invariance, fingerprint, phi, rb_check,
                           scale_weight, with_weight)
from rbx.search import default_workers, search_f3, search_m2

# DERIVED: frozen from the first full default-grid runs (see the decisions ledger)
F3_HITS = 128
F3_BUCKETS = {"inner_splitting": 32, "orbit": 96, "splitting_other": 0, "unmatched": 0}
F3_LABELS = {"inner_splitting": 32, "orbit:case1": 12, "orbit:case2": 12, "orbit:case3": 12, "orbit:case4": 12,
             "orbit:case5": 6, "orbit:case6": 12, "orbit:case7": 12, "orbit:case8": 6, "orbit:case9": 12}
M2_HITS = 218
M2_BUCKETS = {"inner_splitting": 158, "orbit": 60, "splitting_other": 0, "unmatched": 0}
M2_LABELS = {"inner_splitting:M3": 20, "inner_splitting:M4": 32, "inner_splitting:M5": 80,
             "inner_splitting:M6": 24, "inner_splitting:trivial": 2, "orbit:M1": 40, "orbit:M2": 20}
M2_BUDGET_SEC = 300.0  # documented budget for the single-worker run
F3_BUDGET_SEC = 10.0
RB_SUITE_BUDGET_SEC = 1.0

# claims that fail as written and the observed replacement, pinned
DISCREPANCY_IDS = ["2a", "2b", "3c", "3d", "3-diagonal", "6a-M3"]


def _instances():
    for entry in build_catalog():
        for params, R in entry.instances():
            yield entry, params, R


# --- 1 --------------------------------------------------------------------------------


def test_criterion_1_catalog_identity_suite(acceptance):
    cat = build_catalog()
    counts = {
        "M3": sum(e.context is M3 for e in cat),
        "M2 fixed": sum(e.context is M2 and not e.is_family for e in cat),
        "M2 families": sum(e.is_family for e in cat),
        "F3": sum(e.context is F3 for e in cat),
    }
    samples_ok = all(len(e.samples) >= 5 for e in cat if e.is_family)
    ops = [R for _, _, R in _instances()]
    rb_check(ops[0])  # warm the integer path
    t0 = time.perf_counter()
    results = [rb_check(R).ok for R in ops]
    elapsed = time.perf_counter() - t0
    weights_ok = all(R.weight == 1 for R in ops)
    ok = (counts == {"M3": 36, "M2 fixed": 7, "M2 families": 3, "F3": 18} and samples_ok and all(results)
          and weights_ok and elapsed < RB_SUITE_BUDGET_SEC)
    acceptance("1", ok, f"{len(ops)} operators ({counts}), {sum(results)} pass rb_check exactly, "
                        f"{elapsed:.3f}s (< {RB_SUITE_BUDGET_SEC}s)")
    assert ok


# --- 2 --------------------------------------------------------------------------------

# stated values (not computed here)
STATED_TUPLES = {
    ("2a", "2b", "2c", "2-I", "2-II"): (4, 5, 4, 4, 2, 3),
    ("3a", "3b", "3c", "3-I", "3-II"): (4, 4, 4, 5, 1, 2),
    ("4a", "4b", "4c", "4-I", "4-II", "6-I"): (4, 5, 4, 4, 1, 3),
    ("6-II", "6-III", "6-VI"): (6, 7, 2, 2, 1, 3),
    ("5a", "5b", "5-II"): (5, 6, 3, 3, 2, 3),
    ("6a", "6b", "6c", "6-IV", "6-V"): (5, 6, 3, 3, 1, 3),
}
CASE6_DERIVED = ("6a", "6b", "6c", "6-I", "6-II", "6-III", "6-IV", "6-V", "6-VI")


def _phi_swap(t):
    return (t[2], t[3], t[0], t[1], t[5], t[4])


def test_criterion_2_stated_value_fixtures(acceptance):
    from rbx.algebra import annihilators
    from rbx.algebra import span_of_labels

    failures = []
    fp = {lab: fingerprint(get_entry("M3." + lab).operator) for members in STATED_TUPLES for lab in members}
    for members, tup in STATED_TUPLES.items():
        for lab in members:
            if tup not in (fp[lab].six_tuple, _phi_swap(fp[lab].six_tuple)):
                failures.append(f"{lab} six-tuple {fp[lab].six_tuple}")
    # catalog's stored groups agree with these fixtures
    stored = {tuple(m): tuple(t) for m, t in SIX_TUPLE_GROUPS.values()}
    if stored != STATED_TUPLES:
        failures.append("stored six-tuple groups differ")
    for lab, want in (("1a", (3, 1)), ("1b", (3, 1)), ("1c", (3, 1)), ("1-I", (3, 2))):
        got = x_xplus1_exponents(fingerprint(get_entry("M3." + lab).operator).min_poly)
        if got != want:
            failures.append(f"{lab} min poly {got}, want {format_x_xplus1(*want)}")
    for lab in ("7a", "7b", "7c"):
        if fingerprint(get_entry("M3." + lab).operator).rank_pair != (2, 2):
            failures.append(f"{lab} rank pair")
    f8 = fingerprint(get_entry("M3.8-I").operator).six_tuple
    if (f8[0], f8[1]) != (5, 5):
        failures.append(f"8-I ker dims {f8[:2]}")
    f5 = fingerprint(get_entry("M3.5-I").operator)
    if f5.six_tuple[0] != 6 or f5.rank_pair != (2, 3):
        failures.append(f"5-I {f5.six_tuple}")
    for lab in CASE6_DERIVED:
        if fingerprint(get_entry("M3." + lab).operator).trace_R1 != 1:
            failures.append(f"{lab} trace R(1)")
    k5 = kernel(get_entry("M3.6-V").operator.matrix)
    l5, r5 = annihilators(k5, M3)
    if l5.dim != 0 or r5 != span_of_labels(M3, ["e23", "e21"]):
        failures.append("Ann(ker 6-V)")
    l4, r4 = annihilators(kernel(get_entry("M3.6-IV").operator.matrix), M3)
    if l4.dim or r4.dim:
        failures.append("Ann(ker 6-IV)")
    acceptance("2", not failures, "six-tuples a-f, min polys 1*/1-I, rank pairs, ker dims, trace R(1), "
                                  "annihilators" + (f"; mismatches: {failures}" if failures else ": all exact"))
    assert not failures


# --- 3 --------------------------------------------------------------------------------


def test_criterion_3_conjugation_replays(acceptance):
    rep = replay_conjugations()
    replays = [r for r in rep.records if r.check.startswith("replay:")]
    distinct = rep.extra["distinct_replays"]
    fails = rep.failures()
    disc = [d["id"] for d in rep.extra["discrepancies"]]
    confirmed = all(d["confirmed"] for d in rep.extra["discrepancies"])
    ok = rep.green and distinct >= 15 and disc == DISCREPANCY_IDS and confirmed
    acceptance("3", ok, f"{distinct} distinct replays, {len(replays)} parameter instances, {len(fails)} fail; "
                        f"{len(disc)} claims that fail as written are pinned as discrepancies")
    assert ok, [f.check for f in fails]


# --- 4 --------------------------------------------------------------------------------


def test_criterion_4_property_suite(acceptance):
    problems = []
    all_ops = [(e, R) for e, _, R in _instances()]
    for e, R in all_ops:
        if phi(phi(R)).matrix != R.matrix or not rb_check(phi(R)):
            problems.append(f"phi:{e.id}")
        for w in (F(2), F(-3, 4)):
            Rw = with_weight(R, w)
            if not rb_check(Rw) or scale_weight(Rw).matrix != R.matrix:
                problems.append(f"weight:{e.id}")
        if not (is_product_closed(kernel(R.matrix), R.context)
                and is_product_closed(kernel(phi(R).matrix), R.context)):
            problems.append(f"kernel:{e.id}")

    rng = random.Random(2024)
    m3_ops = [R for e, R in all_ops if e.context is M3]
    m2_ops = [R for e, R in all_ops if e.context is M2]
    conj = 0
    while conj < 200:
        n = 3 if conj % 4 else 2
        T = Mat(n, n, [rng.randint(-3, 3) for _ in range(n * n)])
        if not T.is_invertible():
            continue
        R = rng.choice(m3_ops if n == 3 else m2_ops)
        if not rb_check(conjugate(R, inner(T, R.context))):
            problems.append(f"conjugation:{R.name}")
        conj += 1

    ladder = incl = 0
    for e, R in all_ops:
        if e.context is not M3:
            continue
        rep = check_ladder_invariance(R)
        if rep.status != "not-applicable":
            ladder += 1
            if rep.status != "ok":
                problems.append(f"ladder:{e.id}")
        for i, ok in check_idempotent_inclusion(R):
            incl += 1
            if not ok:
                problems.append(f"idempotent-inclusion:{e.id}:{i + 1}")
    table = homogeneity_table_checks()
    table_ok = all(r.status == "pass" for r in table) and len(table) == len(HOMOGENEITY_TABLE) == 9
    ok = not problems and table_ok and ladder > 0 and incl > 0
    acceptance("4", ok, f"phi/weight/kernel checks on {len(all_ops)} operators, {conj} random inner conjugations, "
                        f"ladder invariance on {ladder} entries, idempotent inclusion on {incl} (entry, i) pairs, homogeneity table "
                        f"{sum(r.status == 'pass' for r in table)}/9 rows"
                        + (f"; problems: {problems[:5]}" if problems else ""))
    assert ok


# --- 5 --------------------------------------------------------------------------------


def test_criterion_5_f3_search_oracle(acceptance):
    t0 = time.perf_counter()
    res = search_f3()
    elapsed = time.perf_counter() - t0
    witnesses_ok = all(h.witness for h in res.hits)
    ok = (res.candidates == 19683 and res.complete and not res.unmatched and elapsed < F3_BUDGET_SEC
          and len(res.hits) == F3_HITS and res.bucket_sizes() == F3_BUCKETS and res.label_counts() == F3_LABELS
          and witnesses_ok)
    acceptance("5", ok, f"{res.candidates} candidates, {len(res.hits)} hits (frozen {F3_HITS}), "
                        f"buckets {res.bucket_sizes()}, {elapsed:.2f}s (< {F3_BUDGET_SEC:.0f}s)")
    assert ok


# --- 6 --------------------------------------------------------------------------------


def test_criterion_6_orbit_separation(acceptance):
    rep = orbit_report()
    pairs = [r for r in rep.records if r.check.startswith("pair:")]
    classes = {}
    for r in pairs:
        classes[r.detail["class"]] = classes.get(r.detail["class"], 0) + 1
    # every separation attributed to a computable invariant must be found by one
    computable = [r for r in pairs if not r.detail["basis"].startswith("argument")]
    by_invariant = all(r.detail["class"] == "separated-by-invariant" for r in computable)
    named = [r for r in rep.records if r.check.startswith(("group:", "unique:", "refined:"))]
    named_ok = all(r.status == "pass" for r in named)
    argued = rep.record("conjugator:3-I|3-II").status == "not-found"
    ok = (len(pairs) == 630 and not rep.extra["unclassified"] and rep.green and by_invariant and named_ok
          and argued)
    acceptance("6", ok, f"{len(pairs)} pairs: {classes}; {len(named)} group/uniqueness/refined checks pass; "
                        f"3-I vs 3-II bounded conjugator search: not found")
    assert ok


# --- 7 --------------------------------------------------------------------------------


@pytest.fixture(scope="module")
def m2_run():
    t0 = time.perf_counter()
    res = search_m2(workers=1)
    return res, time.perf_counter() - t0


def test_criterion_7_m2_exhaustive_search(acceptance, m2_run):
    res, elapsed = m2_run
    ok = (res.candidates == 3 ** 16 and res.scanned == res.candidates and res.complete and not res.unmatched
          and elapsed < M2_BUDGET_SEC and len(res.hits) == M2_HITS and res.bucket_sizes() == M2_BUCKETS
          and res.label_counts() == M2_LABELS)
    acceptance("7", ok, f"{res.scanned} of {res.candidates} candidates, {len(res.hits)} hits (frozen {M2_HITS}), "
                        f"unmatched {len(res.unmatched)}, {elapsed:.1f}s single worker ({res.backend}, "
                        f"budget {M2_BUDGET_SEC:.0f}s)")
    assert ok


def test_criterion_7_worker_scaling(acceptance, m2_run):
    cpus = default_workers()
    if cpus < 2:
        acceptance("7 (scaling)", None, f"near-linear speedup to 8 workers not measurable: {cpus} CPU available")
        pytest.skip("needs at least 2 CPUs")
    single, _ = m2_run
    workers = min(8, cpus)
    multi = search_m2(workers=workers, classify=False)
    speedup = single.elapsed / multi.elapsed
    same = [h.index for h in multi.hits] == [h.index for h in single.hits]
    ok = same and speedup >= 0.6 * workers
    acceptance("7 (scaling)", ok, f"{workers} workers: scan speedup {speedup:.1f}x, identical hits: {same}")
    assert ok
