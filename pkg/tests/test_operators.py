import random
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rbx.algebra import F3, M2, M3, span_of_labels
from rbx.catalog import build_catalog, get_entry, split_operator
from rbx.exactlinalg import Mat, kernel
from rbx.operators import (OperatorMatrix, check_commutator_identity, check_ladder_invariance, export_operator, fingerprint,
                           is_inner_splitting, is_splitting_map, kernel_filtration, homogeneity_by_two_extremes, homogeneity_by_shifted_pair,
                           orbit_signature, parse_operator, phi, random_pair_check, rb_check, restrict_to,
                           scale_weight, six_tuple, with_weight)

ENTRIES = [e for e in build_catalog() if not e.is_family]


def test_trivial_operators():
    for ctx in (M2, M3, F3):
        assert rb_check(OperatorMatrix.zero(ctx))
        assert rb_check(OperatorMatrix.scalar(ctx, -1))
        assert not rb_check(OperatorMatrix.scalar(ctx, 1))


def test_failure_reports_basis_witness():
    R = OperatorMatrix.from_images(M2, {"e11": "e22"})
    res = rb_check(R)
    assert not res.ok
    a, b = res.witness
    assert a in M2.basis_labels and b in M2.basis_labels


def test_splitting_operator():
    R = split_operator(span_of_labels(M2, ["e11", "e12"]), span_of_labels(M2, ["e21", "e22"]), 1, M2)
    assert rb_check(R) and is_splitting_map(R)


@pytest.mark.parametrize("entry", ENTRIES, ids=lambda e: e.id)
def test_phi_is_an_involution_preserving_rb(entry):
    R = entry.operator
    assert phi(phi(R)).matrix == R.matrix
    assert rb_check(phi(R))


@pytest.mark.parametrize("w", [F(2), F(-1, 3), F(5, 7)])
def test_weight_scaling(w):
    R = get_entry("M3.6-IV").operator
    Rw = with_weight(R, w)
    assert Rw.weight == w and rb_check(Rw)
    assert scale_weight(Rw).matrix == R.matrix
    # the same matrix at the wrong weight is not RB
    assert not rb_check(OperatorMatrix(M3, Rw.matrix, 1))


def test_fraction_and_integer_checkers_agree():
    rng = random.Random(7)
    for entry in ENTRIES:
        R = entry.operator
        assert random_pair_check(R, rng, trials=3)
    bad = OperatorMatrix.from_images(M3, {"e11": "e22", "e12": "1/2*e13"})
    assert not rb_check(bad) and not random_pair_check(bad, rng)


def test_inner_splitting_detection():
    assert is_inner_splitting(OperatorMatrix.zero(M3))
    assert not is_inner_splitting(get_entry("M3.1a").operator)


def test_fingerprint_values():
    fp = fingerprint(get_entry("M3.6-IV").operator)
    assert fp.six_tuple == (5, 6, 3, 3, 1, 3) == six_tuple(get_entry("M3.6-IV").operator)
    assert fp.trace_R1 == 1
    assert kernel_filtration(get_entry("M3.6-IV").operator, 3)[0] == 5


def test_kernels_are_subalgebras():
    from rbx.algebra import is_product_closed
    for entry in ENTRIES:
        assert is_product_closed(kernel(entry.operator.matrix), entry.context)


def test_ladder_report():
    rep = check_ladder_invariance(get_entry("M3.1a").operator)
    assert rep.status in ("ok", "not-applicable")
    assert check_commutator_identity(get_entry("M3.6-I").operator)


def test_homogeneity_triggers():
    one = (F(1),) * 3
    zero, minus = (F(0),) * 3, (F(-1),) * 3
    e1 = (F(1), F(0), F(0))
    assert homogeneity_by_two_extremes([zero, minus, (F(0), F(1), F(1))], one)
    assert not homogeneity_by_two_extremes([zero, e1, e1], one)
    assert homogeneity_by_shifted_pair([zero, e1, (F(0), F(0), F(1))], one)


def test_operator_file_roundtrip(tmp_path):
    R = get_entry("M3.2-I").operator
    text = export_operator(R)
    back = parse_operator(text)
    assert back.matrix == R.matrix and back.context is M3
    with pytest.raises(ValueError):
        parse_operator("R(e11) = e22")
    with pytest.raises(ValueError):
        parse_operator("operator X on M2 weight 1\nR(e11) = e22\nR(e11) = e11")


def test_restriction_to_invariant_block():
    R = get_entry("M3.6-IV").operator
    block = span_of_labels(M3, ["e11", "e22", "e33"])
    # 6-IV maps e22 -> e11 and kills e11, e33: the diagonal is invariant
    Rd = restrict_to(R, block)
    assert Rd.matrix.shape == (3, 3) and rb_check(Rd)


# --- randomized conjugation ----------------------------------------------------------

from rbx.morphisms import conjugate, inner, transpose_morphism, compose  # noqa: E402

SOURCES = [e.operator for e in ENTRIES if e.context is M3]
entry_ints = st.integers(-2, 2)


@st.composite
def invertible3(draw):
    rows = draw(st.lists(st.lists(entry_ints, min_size=3, max_size=3), min_size=3, max_size=3))
    m = Mat.from_rows(rows)
    if not m.is_invertible():
        m = m + Mat.scalar(3, 7)  # integer entries with |.| <= 2 cannot have eigenvalue -7
    return m


def _psi(T, transposed):
    psi = inner(T, M3)
    return compose(psi, transpose_morphism(M3)) if transposed else psi


@settings(max_examples=200, deadline=None)
@given(invertible3(), st.sampled_from(range(len(SOURCES))), st.booleans())
def test_random_inner_conjugation_preserves_rb(T, k, transposed):
    X = conjugate(SOURCES[k], _psi(T, transposed))
    assert rb_check(X)
    assert six_tuple(X) == six_tuple(SOURCES[k])


@settings(max_examples=15, deadline=None)
@given(invertible3(), st.sampled_from(range(len(SOURCES))), st.booleans())
def test_random_conjugation_preserves_orbit_signature(T, k, transposed):
    X = conjugate(SOURCES[k], _psi(T, transposed))
    assert orbit_signature(X) == orbit_signature(SOURCES[k])
