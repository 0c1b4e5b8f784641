
import numpy as np
import pytest

from rbx import _kernels
from rbx.algebra import F3, M2
from rbx.catalog import f3_case, get_entry, permute_f3
from rbx.operators import OperatorMatrix, phi, rb_check, with_weight
from rbx.search import BUCKETS, classify_f3, classify_m2, search_f3, search_m2


def test_classify_trivial_f3():
    assert classify_f3(OperatorMatrix.zero(F3)).bucket == "inner_splitting"
    assert classify_f3(OperatorMatrix.scalar(F3, -1)).bucket == "inner_splitting"


@pytest.mark.parametrize("k", range(1, 10))
def test_classify_cases_and_their_images(k):
    R = f3_case(k)
    h = classify_f3(R)
    assert (h.bucket, h.label) == ("orbit", f"case{k}")
    moved = permute_f3(phi(R), {1: 3, 3: 1})
    h2 = classify_f3(moved)
    assert h2.bucket == "orbit" and h2.label == f"case{k}"
    # the witness re-creates the operator
    w = h2.witness
    base = phi(f3_case(w["case"])) if w["phi"] else f3_case(w["case"])
    assert permute_f3(base, {int(a): b for a, b in w["permutation"].items()}).matrix == moved.matrix


def test_splitting_witness_on_f3():
    # -projection onto f3 along f1, f2 is splitting and inner only if trivial
    R = OperatorMatrix.from_images(F3, {"f3": "-f3"})
    h = classify_f3(R)
    assert h.bucket in ("orbit", "splitting_other")


def test_f3_default_search_is_complete():
    res = search_f3()
    assert res.candidates == 3 ** 9 and res.complete and not res.unmatched
    assert sum(res.bucket_sizes().values()) == len(res.hits)
    assert set(res.bucket_sizes()) == set(BUCKETS)


def test_f3_search_other_weight():
    res = search_f3(grid=(-2, 0, 2), weight=2)
    assert res.complete and not res.unmatched
    # weight 2 on the doubled grid is the weight 1 picture scaled by 2
    assert len(res.hits) == len(search_f3().hits)


def test_classify_m2_examples():
    assert classify_m2(OperatorMatrix.scalar(M2, -1)).bucket == "inner_splitting"
    # M4' has R(1) = 0, so it sits in the inner-splitting bucket carrying its orbit label
    h = classify_m2(get_entry("M2.M4p").operator)
    assert (h.bucket, h.label) == ("inner_splitting", "M4") and h.witness["conjugator"]
    h = classify_m2(get_entry("M2.M1").operator)
    assert (h.bucket, h.label) == ("orbit", "M1")
    h = classify_m2(with_weight(get_entry("M2.M6").operator, 3))
    assert h.label == "M6"


def test_kernel_agrees_with_exact_checker_on_a_slice():
    """Every candidate in a slice: the kernel's verdict equals rb_check."""
    res = search_m2(budget_sec=None, classify=False, grid=(0, 1))
    assert res.complete and res.candidates == 2 ** 16
    found = {h.index for h in res.hits}
    grid = np.array([0, 1], dtype=np.int64)
    sample = list(range(0, 2 ** 16, 97))
    mats = _kernels.decode(np.array(sample), grid, 16)
    from rbx.exactlinalg import Mat
    for idx, entries in zip(sample, mats):
        R = OperatorMatrix(M2, Mat(4, 4, [int(x) for x in entries]))
        assert bool(rb_check(R)) == (idx in found)


def test_m2_budget_marks_partial():
    res = search_m2(budget_sec=0.0, classify=False)
    assert not res.complete and not res.green
    assert res.scanned < res.candidates


def test_worker_count_does_not_change_hits():
    a = search_m2(grid=(-1, 0), budget_sec=None, classify=False, workers=1)
    b = search_m2(grid=(-1, 0), budget_sec=None, classify=False, workers=2)
    assert [h.index for h in a.hits] == [h.index for h in b.hits]
    assert a.hits and all(rb_check(h.operator) for h in a.hits[:20])
